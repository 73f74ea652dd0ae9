#include "greenwave/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace greenwave {

ProblemSpec josephson_problem(const JosephsonConfig& cfg, SpaceFn u0, SpaceFn u1) {
    ProblemSpec p;
    p.params = {cfg.a, cfg.eps, cfg.c};
    validate(p.params);
    if (cfg.geometry == JosephsonConfig::Geometry::Ring) {
        p.bc = PeriodicBC{cfg.m};
        if (u0) {
            // ring data must wind m times; checked here and again at reduce()
            const double d = u0(constants::two_pi) - u0(0.0) - constants::two_pi * cfg.m;
            if (std::abs(d) > 1e-6)
                throw MatchingViolation(
                    {{"u0 winding consistent with m", u0(constants::two_pi) - u0(0.0),
                      constants::two_pi * cfg.m}});
        }
    } else {
        p.bc = NeumannBC{TimeSignal::zero(), TimeSignal::zero()};
    }
    p.u0 = std::move(u0);
    p.u1 = std::move(u1);

    const double b = cfg.b, gamma = cfg.gamma, a = cfg.a;
    if (cfg.variant == JosephsonConfig::Variant::Basic) {
        p.f = [b, gamma](double, double, double u, double, double) {
            return b * std::sin(u) - gamma;
        };
        p.mu = std::abs(b);
    } else {
        p.f = [b, gamma, a](double, double, double u, double, double ut) {
            return b * std::sin(u) - gamma + a * (1.0 - std::cos(u)) * ut;
        };
        // locally Lipschitz only: mu valid on the monitored ball
        p.locally_lipschitz = true;
        p.ball_u = 4.0 * constants::pi;
        p.ball_ut = 10.0 / cfg.eps;
        p.mu = std::abs(b) + 2.0 * std::abs(a) * (1.0 + p.ball_ut);
    }
    return p;
}

ProblemSpec voigt_problem(const VoigtConfig& cfg, SpaceFn u0, SpaceFn u1, BoundarySpec bc) {
    if (!(cfg.E > 0.0) || !(cfg.rho > 0.0) || !(cfg.mu_v > 0.0))
        throw std::invalid_argument("voigt_problem: E, rho, mu_v must be > 0");
    ProblemSpec p;
    p.params.a = 0.0;
    p.params.c = std::sqrt(cfg.E / cfg.rho);
    p.params.eps = 1.0 / (cfg.rho * cfg.mu_v);
    p.bc = std::move(bc);
    p.u0 = std::move(u0);
    p.u1 = std::move(u1);
    if (cfg.force) {
        const auto force = cfg.force;
        p.f = [force](double x, double t, double, double, double) { return force(x, t); };
    }
    p.mu = 0.0;
    return p;
}

int winding_number(const std::vector<double>& u_samples) {
    const int M = static_cast<int>(u_samples.size());
    if (M < 4) throw std::invalid_argument("winding_number: need a periodic grid");
    // last sample sits at 2pi - dx; scale the span up by M/(M-1) so a pure
    // winding contributes exactly 2 pi m
    const double est =
        (u_samples.back() - u_samples.front()) * M / ((M - 1) * constants::two_pi);
    const double rounded = std::round(est);
    if (std::abs(est - rounded) > 0.1)
        throw std::runtime_error("winding_number: ambiguous estimate " + std::to_string(est));
    return static_cast<int>(rounded);
}

double winding_deviation(const Trajectory& traj, int level) {
    if (traj.bc != BcKind::Periodic)
        throw std::invalid_argument("winding_deviation: periodic trajectories only");
    if (level < 0 || level >= traj.levels())
        throw std::invalid_argument("winding_deviation: level out of range");
    // grid mean of u_x equals (u(2pi) - u(0))/2pi for the lifted field; the
    // periodic part averages to zero in exact arithmetic
    double mean = 0.0;
    for (double v : traj.ux[level]) mean += v;
    mean /= static_cast<double>(traj.ux[level].size());
    return std::abs(mean - traj.winding);
}

}  // namespace greenwave
