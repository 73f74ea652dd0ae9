#pragma once

// Independent second-order finite-difference reference for
//     u_tt + a u_t - c^2 d_xx (eps u_t + u) = f(x, t, u, u_x, u_t)
// on [0, pi] (Dirichlet, boundary data h0/hpi) or [0, 2pi) (periodic, m = 0).
// Centered three-point d_xx, centered two-level time stepping with the
// dissipative terms implicit (tridiagonal / circulant solve per step).
// Used as the oracle for the reduction round-trips; entirely separate from
// the spectral path.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testsupport {

struct FdProblem {
    double a = 0.0, eps = 1.0, c = 1.0;
    bool periodic = false;
    std::function<double(double)> u0, u1;
    std::function<double(double, double, double)> f;  // f(x, t, u); empty = 0
    std::function<double(double)> h0, hpi;            // Dirichlet data (empty = 0)
};

struct FdSolution {
    std::vector<double> x;
    std::vector<std::vector<double>> u;  // [level][point]
    std::vector<double> t;
};

namespace detail {

// Thomas algorithm for a constant tridiagonal (dl, d, du) system.
inline std::vector<double> solve_tridiag(double dl, double d, double du,
                                         std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    std::vector<double> cp(n);
    cp[0] = du / d;
    rhs[0] /= d;
    for (int i = 1; i < n; ++i) {
        const double m = d - dl * cp[i - 1];
        cp[i] = du / m;
        rhs[i] = (rhs[i] - dl * rhs[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
    return rhs;
}

// Circulant tridiagonal (periodic) via Sherman-Morrison.
inline std::vector<double> solve_circulant(double off, double diag, std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    const double gamma = -diag;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = off;
    // modified diagonal entries
    std::vector<double> d(n, diag);
    d[0] -= gamma;
    d[n - 1] -= off * off / gamma;
    auto tri = [&](std::vector<double> b) {
        std::vector<double> cp(n);
        cp[0] = off / d[0];
        b[0] /= d[0];
        for (int i = 1; i < n; ++i) {
            const double m = d[i] - off * cp[i - 1];
            cp[i] = off / m;
            b[i] = (b[i] - off * b[i - 1]) / m;
        }
        for (int i = n - 2; i >= 0; --i) b[i] -= cp[i] * b[i + 1];
        return b;
    };
    const std::vector<double> y = tri(rhs);
    const std::vector<double> z = tri(u);
    const double num = y[0] + (off / gamma) * y[n - 1];
    const double den = 1.0 + z[0] + (off / gamma) * z[n - 1];
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = y[i] - num / den * z[i];
    return out;
}

}  // namespace detail

inline FdSolution fd_solve(const FdProblem& p, double T, int J, double dt_hint = 0.0) {
    const double L = p.periodic ? 2.0 * M_PI : M_PI;
    const double dx = L / J;
    const int npts = p.periodic ? J : J + 1;
    double dt = dt_hint > 0.0 ? dt_hint : 0.25 * dx / p.c;
    const int K = std::max(2, static_cast<int>(std::ceil(T / dt - 1e-12)));
    dt = T / K;

    FdSolution sol;
    sol.x.resize(npts);
    for (int j = 0; j < npts; ++j) sol.x[j] = j * dx;
    sol.t.resize(K + 1);
    for (int i = 0; i <= K; ++i) sol.t[i] = i * dt;

    const double c2 = p.c * p.c;
    auto d2 = [&](const std::vector<double>& v, double t) {
        std::vector<double> out(npts, 0.0);
        if (p.periodic) {
            for (int j = 0; j < npts; ++j) {
                const double vm = v[(j + npts - 1) % npts], vp = v[(j + 1) % npts];
                out[j] = (vp - 2.0 * v[j] + vm) / (dx * dx);
            }
        } else {
            (void)t;
            for (int j = 1; j < npts - 1; ++j)
                out[j] = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (dx * dx);
        }
        return out;
    };
    auto source = [&](double t, const std::vector<double>& u) {
        std::vector<double> out(npts, 0.0);
        if (p.f)
            for (int j = 0; j < npts; ++j) out[j] = p.f(sol.x[j], t, u[j]);
        return out;
    };

    std::vector<double> um(npts), uc(npts);
    for (int j = 0; j < npts; ++j) um[j] = p.u0(sol.x[j]);
    {  // Taylor start, second order
        std::vector<double> v1(npts);
        for (int j = 0; j < npts; ++j) v1[j] = p.u1(sol.x[j]);
        std::vector<double> z(npts);
        for (int j = 0; j < npts; ++j) z[j] = p.eps * v1[j] + um[j];
        const std::vector<double> dz = d2(z, 0.0);
        const std::vector<double> f0 = source(0.0, um);
        for (int j = 0; j < npts; ++j)
            uc[j] = um[j] + dt * v1[j] + 0.5 * dt * dt * (f0[j] - p.a * v1[j] + c2 * dz[j]);
        if (!p.periodic) {
            uc[0] = p.h0 ? p.h0(dt) : 0.0;
            uc[npts - 1] = p.hpi ? p.hpi(dt) : 0.0;
        }
    }

    sol.u.push_back(um);
    sol.u.push_back(uc);

    // [1/dt^2 + a/(2dt)] u+ - (c^2 eps/(2dt)) D2 u+ =
    //   (2/dt^2) u - (1/dt^2 - a/(2dt)) u- + (c^2 eps/(2dt)) D2 u- + c^2 D2 u + f
    const double A0 = 1.0 / (dt * dt) + p.a / (2.0 * dt);
    const double Aoff = -c2 * p.eps / (2.0 * dt) / (dx * dx);
    const double Adiag = A0 + 2.0 * c2 * p.eps / (2.0 * dt) / (dx * dx);
    for (int i = 1; i < K; ++i) {
        const double t = sol.t[i];
        const std::vector<double> d2c = d2(uc, t);
        const std::vector<double> d2m = d2(um, t);
        const std::vector<double> fs = source(t, uc);
        std::vector<double> rhs(npts);
        for (int j = 0; j < npts; ++j)
            rhs[j] = 2.0 / (dt * dt) * uc[j] - (1.0 / (dt * dt) - p.a / (2.0 * dt)) * um[j] +
                     c2 * p.eps / (2.0 * dt) * d2m[j] + c2 * d2c[j] + fs[j];

        std::vector<double> un(npts);
        if (p.periodic) {
            un = detail::solve_circulant(Aoff, Adiag, rhs);
        } else {
            const double b0 = p.h0 ? p.h0(t + dt) : 0.0;
            const double b1 = p.hpi ? p.hpi(t + dt) : 0.0;
            std::vector<double> inner(rhs.begin() + 1, rhs.end() - 1);
            inner.front() -= Aoff * b0;
            inner.back() -= Aoff * b1;
            const std::vector<double> sol_in =
                detail::solve_tridiag(Aoff, Adiag, Aoff, std::move(inner));
            un[0] = b0;
            un[npts - 1] = b1;
            for (int j = 1; j < npts - 1; ++j) un[j] = sol_in[j - 1];
        }
        um = std::move(uc);
        uc = std::move(un);
        sol.u.push_back(uc);
    }
    return sol;
}

/// sup_j |fd(T) - probe(x_j)| for a callable sampled on the fd grid.
inline double fd_final_sup_diff(const FdSolution& s, const std::function<double(double)>& probe) {
    double m = 0.0;
    for (size_t j = 0; j < s.x.size(); ++j)
        m = std::max(m, std::abs(s.u.back()[j] - probe(s.x[j])));
    return m;
}

}  // namespace testsupport
