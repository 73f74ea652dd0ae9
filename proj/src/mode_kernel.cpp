#include "greenwave/mode_kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "greenwave/theta.hpp"

namespace greenwave {

namespace {

// Classification tolerance for omega_sq ~ 0 (relative to h^2 when h is large).
constexpr double tol_crit = 1e-9;
// Inside |omega_sq| t^2 <= band the closed forms are evaluated through the
// even series of sinh(wt)/w and cosh(wt) in y = omega_sq t^2, which is exact
// in omega_sq and free of the 0/0 at the regime boundary.
constexpr double series_band = 1e-4;

struct PQ {
    double P;  // e^{-ht} sinh(wt)/w
    double Q;  // e^{-ht} cosh(wt)
};

PQ eval_pq(const ModeKernel& k, double t) {
    const double s = k.omega_sq;
    const double y = s * t * t;
    if (k.regime == Regime::Critical || std::abs(y) <= series_band) {
        // sinh(wt)/(wt) = 1 + y/6 + y^2/120 + ...,  cosh(wt) = 1 + y/2 + ...
        const double sc = 1.0 + y / 6.0 * (1.0 + y / 20.0 * (1.0 + y / 42.0 * (1.0 + y / 72.0)));
        const double ch = 1.0 + y / 2.0 * (1.0 + y / 12.0 * (1.0 + y / 30.0 * (1.0 + y / 56.0)));
        const double damp = std::exp(-k.h * t);
        return {damp * t * sc, damp * ch};
    }
    if (s > 0.0) {
        // Two-exponential split: both exponents are <= 0 for a >= 0, so no
        // overflow for large n or t (never form e^{-ht} * sinh(wt)).
        const double w = std::sqrt(s);
        const double ep = std::exp((w - k.h) * t);
        const double em = std::exp(-(w + k.h) * t);
        return {(ep - em) / (2.0 * w), 0.5 * (ep + em)};
    }
    const double W = std::sqrt(-s);
    const double damp = std::exp(-k.h * t);
    return {damp * std::sin(W * t) / W, damp * std::cos(W * t)};
}

}  // namespace

ModeKernel make_mode_kernel_freq(double a, double eps, double nu, int n) {
    if (!(eps > 0.0))
        throw std::invalid_argument("make_mode_kernel: eps must be > 0");
    ModeKernel k;
    k.n = n;
    k.nu = std::abs(nu);
    k.a = a;
    k.eps = eps;
    k.h = 0.5 * (a + eps * k.nu * k.nu);
    k.omega_sq = k.h * k.h - k.nu * k.nu;
    const double scale = std::max(1.0, k.h * k.h);
    if (std::abs(k.omega_sq) <= tol_crit * scale)
        k.regime = Regime::Critical;
    else
        k.regime = k.omega_sq > 0.0 ? Regime::Overdamped : Regime::Oscillatory;
    return k;
}

ModeKernel make_mode_kernel(const EquationParams& params, int n) {
    validate(params);
    return make_mode_kernel_freq(params.a, params.eps, params.c * n, n);
}

HDerivs eval_H_all(const ModeKernel& k, double t) {
    if (t < 0.0)
        throw std::invalid_argument("eval_H: t must be >= 0");
    const PQ pq = eval_pq(k, t);
    HDerivs d;
    d.H = pq.P;
    d.Hd = pq.Q - k.h * pq.P;
    d.Hdd = (k.omega_sq + k.h * k.h) * pq.P - 2.0 * k.h * pq.Q;
    return d;
}

double eval_H(const ModeKernel& k, double t, int order) {
    if (order < 0 || order > 2)
        throw std::invalid_argument("eval_H: order must be 0, 1 or 2");
    const HDerivs d = eval_H_all(k, t);
    return order == 0 ? d.H : (order == 1 ? d.Hd : d.Hdd);
}

EpsCombos eval_eps_combos(const ModeKernel& k, double t) {
    if (t < 0.0)
        throw std::invalid_argument("eval_eps_combos: t must be >= 0");
    const double y = k.omega_sq * t * t;
    if (k.regime == Regime::Overdamped && std::abs(y) > series_band) {
        const double w = std::sqrt(k.omega_sq);
        const double pole = k.h + w;
        // h - omega = nu^2/(h + omega), and 1 + eps(omega - h) = (a - D)/pole:
        // both free of the subtractive cancellation of h - sqrt(h^2 - nu^2).
        const double D = k.nu * k.nu / pole;
        const double A = (k.a - D) / pole;
        const double B = k.eps * pole - 1.0;
        const double ep = std::exp(-D * t);
        const double em = std::exp(-pole * t);
        return {(A * ep + B * em) / (2.0 * w), (-A * D * ep - B * pole * em) / (2.0 * w)};
    }
    const PQ pq = eval_pq(k, t);
    // eps(Q - hP) + P and eps((s+h^2)P - 2hQ) + (Q - hP); benign here since
    // h is comparable to nu outside the deep-overdamped branch.
    const double e1 = k.eps * pq.Q + (1.0 - k.eps * k.h) * pq.P;
    const double e2 = (1.0 - 2.0 * k.eps * k.h) * pq.Q +
                      (k.eps * (k.omega_sq + k.h * k.h) - k.h) * pq.P;
    return {e1, e2};
}

BoundEnvelope make_bound_envelope(const EquationParams& params) {
    validate(params);
    BoundEnvelope b;
    b.n_bar = 1 + static_cast<int>(std::floor(2.0 / params.eps));
    const double pi2 = constants::pi * constants::pi;
    b.M = 2.0 + 2.0 * std::log(static_cast<double>(b.n_bar)) + 2.0 * pi2 / (3.0 * params.eps);
    b.kappa = 3.0 + 4.0 / params.eps + 2.0 * pi2 / (9.0 * params.eps * params.eps);
    return b;
}

double sup_envelope_N(const EquationParams& params, double t) {
    const BoundEnvelope b = make_bound_envelope(params);
    return b.M + (params.a > 0.0 ? 1.0 / params.a : t);
}

LemmaBounds bound_oracles(const EquationParams& params, int n, double t) {
    validate(params);
    if (t < 0.0)
        throw std::invalid_argument("bound_oracles: t must be >= 0");
    const double a = params.a, eps = params.eps;
    const ModeKernel k = make_mode_kernel_freq(a, eps, std::abs(n), n);
    const BoundEnvelope env = make_bound_envelope(params);
    const int an = std::abs(n);

    LemmaBounds out;
    out.H_linear = t;
    out.Hd_unit = 1.0;
    const double im_omega = k.omega_sq < 0.0 ? std::sqrt(-k.omega_sq) : 0.0;
    out.one_minus_Hd = (2.0 * k.h + im_omega) * t;

    if (an >= 1) {
        double habs = 1.0 / an;  // 0 < |n| <= n_bar branch
        if (an >= env.n_bar)
            habs = std::min(habs, 2.0 / (eps * double(n) * double(n)));
        if (an > env.n_bar)
            habs = 2.0 / (eps * double(n) * double(n));
        out.H_abs = habs;
    }

    if (an >= env.n_bar) {
        // Here omega is real and positive.  The exponent eps n^2 - 2/eps is
        // positive from n_bar on, so the transients decay.
        const double n2 = double(n) * double(n);
        const double w = std::sqrt(k.omega_sq);
        const double decay = std::exp(-t * (eps * n2 - 2.0 / eps));
        const double pole = 2.0 * k.h;  // a + eps n^2
        for (int l = 0; l <= 2; ++l)
            out.dH_l[l] = (std::pow(2.0 / eps, l) + std::pow(pole, l) * decay) / (2.0 * w);
        // First bracket term is (a eps + 4)/eps^2: the n^2 weight on the left
        // cancels the 1/n^2 of |1 + eps(omega - h)| <= (a eps + 4)/(eps^2 n^2).
        const double c1 = (a * eps + 4.0) / (eps * eps);
        const double c2 = n2 * (a * eps + eps * eps * n2 + 1.0);
        out.eps_Hd_plus_H = (c1 + c2 * decay) / (2.0 * w);
        out.eps_Hdd_plus_Hd = (c1 * (2.0 / eps) + c2 * pole * decay) / (2.0 * w);
    }
    return out;
}

L2Bounds l2_norm_bounds(const EquationParams& params, double t) {
    validate(params);
    const double eps = params.eps;
    const double pi2 = constants::pi * constants::pi;
    L2Bounds b;
    b.theta_x = 2.0 + 4.0 / eps + 4.0 * pi2 / (3.0 * eps * eps);
    if (!(t > 0.0))
        throw std::invalid_argument("l2_norm_bounds: theta_t/theta_tx bounds need t > 0");
    const BoundEnvelope env = make_bound_envelope(params);
    const double ex = 4.0 * t / eps;
    const double eta = 2.0 * eps * t / constants::pi;
    if (ex > 700.0) {
        b.theta_t = std::numeric_limits<double>::infinity();
        b.theta_tx = std::numeric_limits<double>::infinity();
    } else {
        const double grow = std::exp(ex);
        b.theta_t = env.kappa + 8.0 * grow * jacobi_theta3(eta);
        const double q = 2.0 / eps + 1.0;
        const double q4 = q * q * q * q;
        // -(8/eps) e^{4t/eps} d/dt theta3(2 eps t / pi) = -(16/pi) e^{..} theta3'(eta)
        b.theta_tx = q4 * (q4 + 1.0) + 12.0 / (eps * eps) -
                     (16.0 / constants::pi) * grow * jacobi_theta3_deriv(eta);
    }
    return b;
}

namespace {

// gap(m) = h_m - omega_m >= m^2/(a + eps m^2); the right side increases with
// m, so it lower-bounds the decay rate of every mode past N.
double tail_gap(const EquationParams& p, int N) {
    const double m = N + 1;
    return m * m / (p.a + p.eps * m * m);
}

// 1/(2 omega_n) <= 2/(eps n^2) requires eps^2 n^2 >= 16/3; start tails at
// N >= 4/(sqrt(3) eps) so the closed-form sum is valid.
int tail_cutoff(const EquationParams& p) {
    const BoundEnvelope env = make_bound_envelope(p);
    const int n_min = static_cast<int>(std::ceil(4.0 / (std::sqrt(3.0) * p.eps)));
    return std::max(env.n_bar, n_min);
}

}  // namespace

double theta_tail_bound(const EquationParams& params, double t, int N) {
    if (N < tail_cutoff(params))
        throw std::invalid_argument("theta_tail_bound: N below validity cutoff");
    return 4.0 / (params.eps * N) * std::exp(-t * tail_gap(params, N));
}

int truncation_floor(const EquationParams& params, double t, double tol) {
    validate(params);
    if (t < 0.0)
        throw std::invalid_argument("truncation_floor: t must be >= 0");
    if (!(tol > 0.0))
        throw std::invalid_argument("truncation_floor: tol must be > 0");
    constexpr int cap = 1 << 26;
    int lo = tail_cutoff(params);
    if (theta_tail_bound(params, t, lo) <= tol) return lo;
    int hi = lo;
    while (hi < cap && theta_tail_bound(params, t, hi) > tol) hi *= 2;
    if (theta_tail_bound(params, t, hi) > tol)
        throw std::domain_error("truncation_floor: no feasible truncation below cap for t=" +
                                std::to_string(t) + ", tol=" + std::to_string(tol));
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (theta_tail_bound(params, t, mid) > tol ? lo : hi) = mid;
    }
    return hi;
}

double theta_kernel(const EquationParams& params, double x, double t, int n_max, double tol) {
    validate(params);
    if (t < 0.0)
        throw std::invalid_argument("theta_kernel: t must be >= 0");
    if (t == 0.0) return 0.0;  // every H_n(0) = 0
    if (n_max < truncation_floor(params, t, tol))
        throw std::invalid_argument("theta_kernel: n_max below truncation floor for tol=" +
                                    std::to_string(tol));
    double sum = eval_H(make_mode_kernel_freq(params.a, params.eps, 0.0), t, 0);
    for (int n = 1; n <= n_max; ++n) {
        const ModeKernel k = make_mode_kernel_freq(params.a, params.eps, n, n);
        sum += 2.0 * eval_H(k, t, 0) * std::cos(n * x);
    }
    return sum / constants::two_pi;
}

}  // namespace greenwave
