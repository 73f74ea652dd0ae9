#pragma once

#include "greenwave/picard.hpp"
#include "greenwave/problem.hpp"

namespace greenwave {

/// Josephson junction: f = b sin u - gamma, optionally plus the
/// a (1 - cos u) u_t correction (Extended), on a ring (pseudoperiodic,
/// winding m counts trapped fluxons) or an open strip (Neumann).
struct JosephsonConfig {
    double b = 1.0;      // critical-current coefficient
    double gamma = 0.0;  // bias current
    double a = 0.0;
    double eps = 1.0;
    double c = 1.0;
    enum class Variant { Basic, Extended };
    Variant variant = Variant::Basic;
    enum class Geometry { Ring, Strip };
    Geometry geometry = Geometry::Ring;
    int m = 0;  // fluxon count (Ring only)
};

ProblemSpec josephson_problem(const JosephsonConfig& cfg, SpaceFn u0, SpaceFn u1);

/// Viscoelastic Voigt rod: a = 0, c^2 = E/rho, eps = 1/(rho mu_v), applied
/// force density f(x, t); linear, so Picard converges in one step.
struct VoigtConfig {
    double E = 1.0;
    double rho = 1.0;
    double mu_v = 1.0;
    std::function<double(double, double)> force;  // f(x, t), may be empty
};

ProblemSpec voigt_problem(const VoigtConfig& cfg, SpaceFn u0, SpaceFn u1, BoundarySpec bc);

/// Nearest integer to (u(2pi) - u(0)) / 2pi from samples on a periodic grid.
/// Throws when the estimate sits further than 0.1 from every integer.
int winding_number(const std::vector<double>& u_samples);

/// Winding deviation before rounding at one snapshot of a lifted trajectory:
/// |(u(x + 2pi) - u(x) - 2 pi m)| / 2pi measured through the periodic part
/// (exact up to synthesis roundoff, by construction of the lift).
double winding_deviation(const Trajectory& traj, int level);

}  // namespace greenwave
