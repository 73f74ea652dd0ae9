#pragma once

#include <optional>

#include "greenwave/params.hpp"

namespace greenwave {

enum class Regime { Overdamped, Critical, Oscillatory };

/// One Fourier mode of the homogeneous equation.  H_n solves
///
///     H'' + a H' + nu^2 (eps H' + H) = 0,   H(0) = 0, H'(0) = 1,
///
/// with half-damping h = (a + eps nu^2)/2 and omega^2 = h^2 - nu^2.
/// nu is the effective spatial frequency: |n| for a canonical (c = 1)
/// problem, c*|n| when the engine folds the wave speed into the modes.
/// H_{-n} = H_n, so kernels are built from |n| and shared.
struct ModeKernel {
    int n = 0;
    double nu = 0.0;
    double h = 0.0;
    double omega_sq = 0.0;
    Regime regime = Regime::Critical;
    double a = 0.0;    // as constructed (a = 2h - eps nu^2)
    double eps = 1.0;
};

/// H together with its first two time derivatives at one t.
struct HDerivs {
    double H = 0.0;
    double Hd = 0.0;
    double Hdd = 0.0;
};

ModeKernel make_mode_kernel(const EquationParams& params, int n);

/// Kernel at an arbitrary real frequency (used internally for c != 1).
ModeKernel make_mode_kernel_freq(double a, double eps, double nu, int n = 0);

HDerivs eval_H_all(const ModeKernel& k, double t);
double eval_H(const ModeKernel& k, double t, int order);

/// eps H' + H and eps H'' + H' evaluated through their own two-exponential
/// closed forms.  Deep in the overdamped regime these combinations are
/// orders of magnitude smaller than their summands, so composing them from
/// eval_H output loses all significant digits; the direct forms do not.
struct EpsCombos {
    double eps_Hd_plus_H = 0.0;
    double eps_Hdd_plus_Hd = 0.0;
};

EpsCombos eval_eps_combos(const ModeKernel& k, double t);

/// n_bar, M and kappa of the tail-control machinery: for |n| >= n_bar the
/// mode is overdamped with n^2/h_n <= 2/eps, which yields the t-uniform
/// 2/(eps n^2) decay of H_n and the closed-form constants below.
struct BoundEnvelope {
    int n_bar = 1;     // 1 + floor(2/eps)
    double M = 0.0;    // 2 + 2 ln(n_bar) + 2 pi^2 / (3 eps)
    double kappa = 0;  // 3 + 4/eps + 2 pi^2 / (9 eps^2)
};

BoundEnvelope make_bound_envelope(const EquationParams& params);

/// N(t) = M + 1/a (a > 0) or M + t (a = 0): the sup envelope of 2 pi |theta|.
double sup_envelope_N(const EquationParams& params, double t);

/// Right-hand sides of the per-mode analytic bounds at (n, t).  Bounds that
/// only hold for |n| >= n_bar are absent below that threshold, the
/// 1/|n| bound is absent for n = 0.  Callers compare against eval_H output.
struct LemmaBounds {
    // |d^l H/dt^l| <= dH_l[l], valid for |n| >= n_bar
    std::optional<double> dH_l[3];
    // n^2 |eps H' + H| and n^2 |eps H'' + H'|, valid for |n| >= n_bar
    std::optional<double> eps_Hd_plus_H;
    std::optional<double> eps_Hdd_plus_Hd;
    // |H| <= H_abs: 1/|n| for 0 < |n| <= n_bar, 2/(eps n^2) for |n| >= n_bar
    // (the min of both at |n| = n_bar, where each applies)
    std::optional<double> H_abs;
    double H_linear = 0.0;      // |H| <= t
    double Hd_unit = 1.0;       // |H'| <= 1
    double one_minus_Hd = 0.0;  // |1 - H'| <= (2h + |Im omega|) t
};

LemmaBounds bound_oracles(const EquationParams& params, int n, double t);

/// Right-hand sides of the three squared-L2 mode-sum bounds:
///   sum |n H_n|^2, sum |H'_n|^2, sum |n H'_n|^2  (each times 4 pi^2 norms).
struct L2Bounds {
    double theta_x = 0.0;
    double theta_t = 0.0;
    double theta_tx = 0.0;
};

L2Bounds l2_norm_bounds(const EquationParams& params, double t);

/// Smallest N >= n_bar such that the mode tail sum_{|n|>N} |H_n(t)| is
/// provably <= tol, via |H_n(t)| <= (2/(eps n^2)) exp(-t q_N) with
/// q_N = (N+1)^2/(a + eps (N+1)^2).  Throws if no N <= hard cap works.
int truncation_floor(const EquationParams& params, double t, double tol = 1e-12);

/// Rigorous bound on sum_{|n|>N} |H_n(t)| for N >= the validity cutoff.
double theta_tail_bound(const EquationParams& params, double t, int N);

/// theta(x,t) = (1/2pi)[H_0(t) + 2 sum_{n=1..n_max} H_n(t) cos(n x)].
/// Exactly 0 at t = 0.  Rejects n_max below the truncation floor.
double theta_kernel(const EquationParams& params, double x, double t, int n_max,
                    double tol = 1e-12);

}  // namespace greenwave
