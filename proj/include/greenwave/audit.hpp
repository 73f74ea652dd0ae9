#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "greenwave/params.hpp"
#include "greenwave/spectral.hpp"

namespace greenwave {

/// One checked inequality instance.  Pass rule: lhs <= rhs (1 + 1e-12) + 1e-300,
/// so double rounding cannot raise false alarms on tight bounds.
struct AuditRecord {
    std::string inequality;
    double n = 0.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // (rhs - lhs) / max(|rhs|, |lhs|, tiny), signed
};

struct AuditSummary {
    std::string inequality;
    long checked = 0;
    long failed = 0;
    double min_slack = 0.0;
    double argmin_n = 0.0;
    double argmin_t = 0.0;
};

struct AuditReport {
    std::vector<AuditRecord> failures;  // one record per failing (inequality, n, t)
    std::vector<AuditSummary> summaries;
    bool all_pass() const { return failures.empty(); }
    void merge(AuditReport other);
};

bool audit_pass(double lhs, double rhs);
double audit_slack(double lhs, double rhs);

/// CSV: header row, failure rows, then one "summary:<id>" row per
/// inequality with (checked, failed, min_slack, argmin_n, argmin_t) in the
/// (n, t, lhs, rhs, slack) columns.
void write_audit_csv(std::ostream& os, const AuditReport& report);

/// Per-mode bound sweep: (disegHnl) l = 0,1,2 and the two n^2-weighted
/// combinations for |n| >= n_bar, the 1/|n| vs 2/(eps n^2) bound, |H| <= t,
/// |H'| <= 1 and the |1 - H'| ramp, over n_range x t_grid.
struct LemmaAuditOptions {
    int n_min = -200;
    int n_max = 200;
    std::vector<double> t_grid;
    double corrupt_scale = 1.0;  // test hook: scales the evaluated kernel values
    int threads = 1;
};
AuditReport audit_lemma(const EquationParams& params, const LemmaAuditOptions& opt);

/// theta-kernel audit: the |theta(x,t)| <= theta(0,t) <= N(t)/2pi chain on a
/// grid of x, the sup envelope 2pi sup_x |theta| <= N(t), theta(.,0) = 0,
/// evenness/periodicity, and the three truncated L2 mode sums against
/// l2_norm_bounds.  Mode sums are capped at n_modes with the rigorous tail
/// bound folded into each comparison.
struct Prop1AuditOptions {
    std::vector<double> t_grid;
    int n_modes = 16384;
    int x_points = 64;
    int threads = 1;
};
AuditReport audit_prop1(const EquationParams& params, const Prop1AuditOptions& opt);

/// Short-time audit of the Green convolution for one band-limited g:
/// sup|w^g(.,t)| under sqrt(t N(t)) ||g||_2, sup|w^g_t(.,t) - g| under the
/// (2h + |Im omega|) ramp, boundary traces, and the weak delta-limit
/// pairing <w^g_t(.,t), phi> -> phi(0) for band-limited phi.
struct Prop2AuditOptions {
    std::vector<double> t_seq;  // decreasing sequence toward 0
    int threads = 1;
};
AuditReport audit_prop2(const EquationParams& params, const std::vector<double>& g_samples,
                        const SpaceGrid& grid, Basis basis, const Prop2AuditOptions& opt);

/// Independent reference for H_n: adaptive RK45 integration of the mode ODE
/// from (0, 1) initial data; shares no code with the closed forms.
struct OdeReference {
    double H = 0.0, Hd = 0.0, Hdd = 0.0;
};
OdeReference ode_reference_H(double a, double eps, double nu, double t, double rel_tol = 1e-12);

/// Cross-oracle: eval_H vs ode_reference_H at `tuples` seeded random
/// (n, a, eps, t) draws; one record per tuple that misses rel_tol.
struct KernelOdeAuditOptions {
    int tuples = 50;
    std::uint64_t seed = 1;
    double rel_tol = 1e-9;
    int n_max = 40;
};
AuditReport audit_kernel_ode(const KernelOdeAuditOptions& opt);

}  // namespace greenwave
