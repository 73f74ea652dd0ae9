#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenwave/problem.hpp"

namespace greenwave {

/// (u, u_x, u_t) at one space-time point.
struct PointValues {
    double u = 0.0, ux = 0.0, ut = 0.0;
};

/// Pointwise change of unknown: canonical values at (x, t) -> user values.
using PointMap = std::function<PointValues(double x, double t, const PointValues&)>;

PointMap identity_map();
PointMap compose(PointMap inner, PointMap outer);  // outer(inner(.))

struct MatchingEntry {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    double diff() const { return lhs - rhs; }
};

/// Thrown when the boundary/initial matching conditions fail; lists which of
/// the conditions failed and by how much.
class MatchingViolation : public std::runtime_error {
  public:
    explicit MatchingViolation(std::vector<MatchingEntry> entries);
    const std::vector<MatchingEntry>& entries() const { return entries_; }

  private:
    std::vector<MatchingEntry> entries_;
};

/// Exact change of unknown absorbing boundary data (or winding) into a
/// modified source and initial data.  canonical has zero boundary data /
/// winding; lift maps canonical (u, u_x, u_t) back to user values, so
/// applying it to any trajectory with homogeneous BC restores the original
/// boundary values exactly.
struct HomogenizeResult {
    ProblemSpec canonical;
    PointMap lift;
    int winding = 0;  // original m (PBC)
};
HomogenizeResult homogenize(const ProblemSpec& p, double tol_match = 1e-8);

/// a < 0 only: u = e^{-a t/2} v turns the anti-damped problem into an a = 0
/// one with eps/(1 - a eps/2) and wave speed scaled by sqrt(1 - a eps/2).
/// The transformed initial velocity is u1 + (a/2) u0 and the source gains
/// the (a^2/4) v term.  Requires zero winding (homogenize first).
struct DampingResult {
    ProblemSpec canonical;
    PointMap unmap;
};
DampingResult normalize_damping(const ProblemSpec& p);

/// c != 1: coordinate stretch x~ = x/c; the returned problem has c = 1 on a
/// domain shorter by 1/c (domain_scale).  The engine itself never resamples:
/// it folds c into the mode frequencies (see CanonicalProblem::freq_scale),
/// which is the same linear algebra on one grid.
struct SpeedResult {
    ProblemSpec canonical;
    double domain_scale = 1.0;  // canonical domain = original * domain_scale
    PointMap unmap;
};
SpeedResult normalize_speed(const ProblemSpec& p);

/// Odd/even extension of interval samples ([0,pi], nx+1 values) to the
/// periodic grid ([0,2pi), 2nx values).  Restriction to [0,pi] is the
/// identity.  Endpoint conditions are enforced within tol (absolute,
/// relative to the field scale): values for odd, one-sided derivatives for
/// even.
std::vector<double> extend(const std::vector<double>& field, bool odd, double tol = 1e-6);

/// Fully reduced problem: a >= 0, homogeneous boundary data, wave speed
/// folded into the effective mode frequency nu = freq_scale * n.
struct CanonicalProblem {
    double a = 0.0;
    double eps = 1.0;
    double freq_scale = 1.0;
    BcKind bc = BcKind::Periodic;
    int winding = 0;  // original winding, for lifting / diagnostics
    SpaceFn u0, u1;
    SourceFn f;
    double mu = 0.0;
    bool locally_lipschitz = false;
    double ball_u = 0.0, ball_ut = 0.0;
    PointMap lift;  // canonical values -> user values
    EquationParams user_params;

    EquationParams params() const { return {a, eps, 1.0}; }
};

/// homogenize, then normalize_damping when a < 0 (that order keeps the
/// pseudoperiodic case exact: e^{at/2} u is not pseudoperiodic for m != 0).
CanonicalProblem reduce(const ProblemSpec& p, double tol_match = 1e-8);

}  // namespace greenwave
