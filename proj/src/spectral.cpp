#include "greenwave/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "greenwave/fft.hpp"

namespace greenwave {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double abs_scale(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return std::max(1.0, m);
}

}  // namespace

SpaceGrid SpaceGrid::periodic(int nx) {
    if (!is_pow2(nx)) throw std::invalid_argument("SpaceGrid::periodic: nx must be a power of two");
    return {Kind::Periodic, nx};
}

SpaceGrid SpaceGrid::interval(int nx) {
    if (!is_pow2(nx)) throw std::invalid_argument("SpaceGrid::interval: nx must be a power of two");
    return {Kind::Interval, nx};
}

std::vector<double> SpaceGrid::points() const {
    std::vector<double> p(num_points());
    for (int j = 0; j < num_points(); ++j) p[j] = point(j);
    return p;
}

std::vector<double> extend_samples(const std::vector<double>& samples, bool odd) {
    const int nx = static_cast<int>(samples.size()) - 1;
    std::vector<double> out(2 * nx);
    for (int j = 0; j <= nx; ++j) out[j] = samples[j];
    for (int j = 1; j < nx; ++j) out[2 * nx - j] = odd ? -samples[j] : samples[j];
    if (odd) {
        out[0] = 0.0;
        out[nx] = 0.0;
    }
    return out;
}

SpectralField analyze(const std::vector<double>& samples, const SpaceGrid& grid, Basis basis,
                      int trunc, ParityCheck parity) {
    if (static_cast<int>(samples.size()) != grid.num_points())
        throw std::invalid_argument("analyze: sample count does not match grid");
    if (trunc < 0 || trunc > grid.nx - 1)
        throw std::invalid_argument("analyze: trunc must be in [0, nx-1]");
    if ((basis == Basis::ComplexExp) != (grid.kind == SpaceGrid::Kind::Periodic))
        throw std::invalid_argument("analyze: basis does not match grid kind");

    const int M = 2 * grid.nx;
    std::vector<std::complex<double>> buf(M);
    if (basis == Basis::ComplexExp) {
        for (int j = 0; j < M; ++j) buf[j] = samples[j];
    } else {
        const bool odd = basis == Basis::Sine;
        if (parity == ParityCheck::Enforce) {
            const double scale = abs_scale(samples);
            if (odd) {
                if (std::abs(samples.front()) > 1e-6 * scale ||
                    std::abs(samples.back()) > 1e-6 * scale)
                    throw ParityViolation("analyze: odd extension needs vanishing endpoint values");
            } else {
                const int nx = grid.nx;
                const double dx = grid.dx();
                const double d0 =
                    (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * dx);
                const double d1 =
                    (3.0 * samples[nx] - 4.0 * samples[nx - 1] + samples[nx - 2]) / (2.0 * dx);
                if (std::abs(d0) > 1e-3 * scale || std::abs(d1) > 1e-3 * scale)
                    throw ParityViolation(
                        "analyze: even extension needs vanishing one-sided derivatives");
            }
        }
        const std::vector<double> ext = extend_samples(samples, odd);
        for (int j = 0; j < M; ++j) buf[j] = ext[j];
    }
    fft_inplace(buf, false);

    SpectralField f;
    f.basis = basis;
    f.trunc = trunc;
    if (basis == Basis::ComplexExp) {
        f.c.resize(trunc + 1);
        for (int n = 0; n <= trunc; ++n) f.c[n] = buf[n] / double(M);
    } else if (basis == Basis::Sine) {
        // g = sum b_n sin(nx) has c_n = -i b_n / 2; taking -2 Im also drops
        // any even contamination (e.g. nonzero endpoints of a relaxed source).
        f.r.resize(trunc);
        for (int n = 1; n <= trunc; ++n) f.r[n - 1] = -2.0 * buf[n].imag() / double(M);
    } else {
        f.r.resize(trunc + 1);
        f.r[0] = buf[0].real() / double(M);
        for (int n = 1; n <= trunc; ++n) f.r[n] = 2.0 * buf[n].real() / double(M);
    }
    return f;
}

std::vector<double> synthesize(const SpectralField& f, const SpaceGrid& grid) {
    if ((f.basis == Basis::ComplexExp) != (grid.kind == SpaceGrid::Kind::Periodic))
        throw std::invalid_argument("synthesize: basis does not match grid kind");
    if (f.trunc > grid.nx - 1)
        throw std::invalid_argument("synthesize: field truncation exceeds grid");

    const int M = 2 * grid.nx;
    std::vector<std::complex<double>> buf(M, 0.0);
    if (f.basis == Basis::ComplexExp) {
        buf[0] = f.c[0];
        for (int n = 1; n <= f.trunc; ++n) {
            buf[n] = f.c[n];
            buf[M - n] = std::conj(f.c[n]);
        }
    } else if (f.basis == Basis::Sine) {
        for (int n = 1; n <= f.trunc; ++n) {
            const std::complex<double> cn(0.0, -0.5 * f.r[n - 1]);
            buf[n] = cn;
            buf[M - n] = std::conj(cn);
        }
    } else {
        buf[0] = f.r[0];
        for (int n = 1; n <= f.trunc; ++n) {
            buf[n] = 0.5 * f.r[n];
            buf[M - n] = 0.5 * f.r[n];
        }
    }
    fft_inplace(buf, true);
    std::vector<double> out(grid.num_points());
    for (int j = 0; j < grid.num_points(); ++j) out[j] = buf[j].real();
    return out;
}

SpectralField spectral_derivative(const SpectralField& f) {
    SpectralField d;
    d.trunc = f.trunc;
    switch (f.basis) {
        case Basis::ComplexExp:
            d.basis = Basis::ComplexExp;
            d.c.resize(f.trunc + 1);
            for (int n = 0; n <= f.trunc; ++n)
                d.c[n] = std::complex<double>(0.0, double(n)) * f.c[n];
            break;
        case Basis::Sine:
            d.basis = Basis::Cosine;
            d.r.assign(f.trunc + 1, 0.0);
            for (int n = 1; n <= f.trunc; ++n) d.r[n] = double(n) * f.r[n - 1];
            break;
        case Basis::Cosine:
            d.basis = Basis::Sine;
            d.r.assign(f.trunc, 0.0);
            for (int n = 1; n <= f.trunc; ++n) d.r[n - 1] = -double(n) * f.r[n];
            break;
    }
    return d;
}

SpectralField green_convolve(const SpectralField& g, double t, const EquationParams& params,
                             int order, double freq_scale) {
    if (order < 0 || order > 1)
        throw std::invalid_argument("green_convolve: order must be 0 or 1");
    SpectralField out = g;
    for (int k = 0; k < g.num_modes(); ++k) {
        const int n = g.mode_of(k);
        const ModeKernel mk = make_mode_kernel_freq(params.a, params.eps, freq_scale * n, n);
        const double w = eval_H(mk, t, order);
        if (g.basis == Basis::ComplexExp)
            out.c[k] *= w;
        else
            out.r[k] *= w;
    }
    return out;
}

std::pair<SpectralField, SpectralField> homogeneous_evolution(const SpectralField& u0,
                                                              const SpectralField& u1, double t,
                                                              const EquationParams& params,
                                                              double freq_scale) {
    if (u0.basis != u1.basis || u0.trunc != u1.trunc)
        throw std::invalid_argument("homogeneous_evolution: mismatched fields");
    SpectralField u = u0, ut = u0;
    for (int k = 0; k < u0.num_modes(); ++k) {
        const int n = u0.mode_of(k);
        const ModeKernel mk = make_mode_kernel_freq(params.a, params.eps, freq_scale * n, n);
        const HDerivs d = eval_H_all(mk, t);
        const double nu2 = mk.nu * mk.nu;
        if (u0.basis == Basis::ComplexExp) {
            const std::complex<double> a0 = u0.c[k], a1 = u1.c[k];
            u.c[k] = (a1 + 2.0 * mk.h * a0) * d.H + a0 * d.Hd;
            ut.c[k] = a1 * d.Hd - nu2 * a0 * d.H;
        } else {
            const double a0 = u0.r[k], a1 = u1.r[k];
            u.r[k] = (a1 + 2.0 * mk.h * a0) * d.H + a0 * d.Hd;
            ut.r[k] = a1 * d.Hd - nu2 * a0 * d.H;
        }
    }
    return {u, ut};
}

}  // namespace greenwave
