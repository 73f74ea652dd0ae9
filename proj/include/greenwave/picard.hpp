#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "greenwave/reduction.hpp"
#include "greenwave/spectral.hpp"

namespace greenwave {

/// Sampled (u, u_x, u_t) on the space-time grid; the state the Picard map
/// iterates.  u_x is the spectral derivative of u at each level.
struct Trajectory {
    SpaceGrid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> u, ux, ut;  // [level][point]
    BcKind bc = BcKind::Periodic;
    int winding = 0;

    int levels() const { return static_cast<int>(times.size()); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// sum of the three maxima of e^{-lambda t} |dv| over the grid (the Banach
/// norm of the fixed-point argument, restricted to grid points).
double weighted_norm(const Trajectory& v1, const Trajectory& v2, double lambda);

/// Explicitly computable contraction coefficient of the fixed-point map in
/// the lambda-weighted norm:
///   factor = (mu/lambda) [2 M' + sqrt(2 + (12 + 2 pi^2)/(3 eps)) + sqrt(kappa)]
///            + Theta Gamma(3/4) (lambda - 2/eps)^{-3/4}
/// with M' = M (+ 1/a or + 1/lambda for PBC/NBC), kappa from the L2 bounds
/// and Theta = 2 (2 pi/eps)^{1/4} sqrt(theta3(pi/(2 eps T))).
struct ContractionCertificate {
    double lambda = 0.0;
    double mu = 0.0;
    double factor = 0.0;
    bool valid = false;  // factor < 1
    double M_prime = 0.0;
    double kappa = 0.0;
    double Theta = 0.0;
};

ContractionCertificate certify(double a, double eps, BcKind bc, double mu, double T,
                               std::optional<double> lambda_hint = std::nullopt);

struct SolveOptions {
    double T = 1.0;
    double dt = 1.0 / 64;
    int N = 32;                 // mode truncation
    double stop_tol = 1e-10;
    int k_max = 200;
    std::optional<double> lambda;  // certificate search hint
    int threads = 1;               // 0 = hardware concurrency
    double tol_match = 1e-8;
};

struct IterationRecord {
    int k = 0;
    double weighted = 0.0;    // ||v^k - v^{k-1}|| at the certificate lambda
    double unweighted = 0.0;  // same at lambda = 0
    double ratio = 0.0;       // weighted_k / weighted_{k-1}, 0 for k = 1
};

class IterationDiverged : public std::runtime_error {
  public:
    IterationDiverged(std::string msg, std::vector<IterationRecord> log)
        : std::runtime_error(std::move(msg)), log_(std::move(log)) {}
    const std::vector<IterationRecord>& log() const { return log_; }

  private:
    std::vector<IterationRecord> log_;
};

struct SolveResult {
    Trajectory trajectory;  // user coordinates
    ContractionCertificate certificate;
    std::vector<IterationRecord> log;
    int iterations = 0;
    bool converged = false;
    bool certificate_warning = false;  // no contracting lambda found
    bool ball_exceeded = false;        // locally-Lipschitz iterate left its ball
};

/// One application of the integral-equation map: homogeneous evolution plus
/// the Duhamel convolution of f(., ., V) by composite trapezoid.  Exposed
/// for direct testing; solve() drives it with a persistent engine.
class PicardEngine {
  public:
    PicardEngine(CanonicalProblem cp, const SolveOptions& opt);
    ~PicardEngine();
    PicardEngine(PicardEngine&&) noexcept;

    Trajectory initial_guess() const;          // homogeneous evolution
    Trajectory step(const Trajectory& v) const;  // T(v)
    Trajectory lift(const Trajectory& canonical) const;
    const SpaceGrid& grid() const;
    const std::vector<double>& times() const;
    const CanonicalProblem& problem() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Trajectory picard_step(const Trajectory& v, const CanonicalProblem& cp, const SolveOptions& opt);

SolveResult solve(const ProblemSpec& p, const SolveOptions& opt);

/// A-posteriori defect of the full PDE on a trajectory in user coordinates:
/// centered differences in t, spectral in x (boundary lifts subtracted
/// analytically first).  Needs at least 5 time levels.
struct ResidualNorms {
    double sup = 0.0;
    double l2 = 0.0;
};
ResidualNorms residual(const Trajectory& traj, const ProblemSpec& p);

}  // namespace greenwave
