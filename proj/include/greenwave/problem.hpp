#pragma once

#include <functional>
#include <limits>
#include <variant>

#include "greenwave/params.hpp"
#include "greenwave/time_signal.hpp"

namespace greenwave {

enum class BcKind { Periodic, Dirichlet, Neumann };

struct PeriodicBC {
    int m = 0;  // winding: u(x + 2pi, t) = u(x, t) + 2 pi m
};
struct DirichletBC {
    TimeSignal h0, hpi;
};
struct NeumannBC {
    TimeSignal k0, kpi;
};
using BoundarySpec = std::variant<PeriodicBC, DirichletBC, NeumannBC>;

inline BcKind kind_of(const BoundarySpec& bc) {
    if (std::holds_alternative<PeriodicBC>(bc)) return BcKind::Periodic;
    return std::holds_alternative<DirichletBC>(bc) ? BcKind::Dirichlet : BcKind::Neumann;
}

using SpaceFn = std::function<double(double)>;
/// f(x, t, u, u_x, u_t)
using SourceFn = std::function<double(double, double, double, double, double)>;

struct ProblemSpec {
    EquationParams params;
    BoundarySpec bc;
    SpaceFn u0, u1;
    /// Optional analytic space-derivatives of the initial data; used for the
    /// Neumann matching conditions (finite differences otherwise).
    SpaceFn u0_x, u1_x;
    SourceFn f;  // empty means f == 0
    double mu = 0.0;
    /// Locally-Lipschitz sources: mu only valid on the stated ball, and the
    /// solver monitors sup|u|, sup|u_t| against it.
    bool locally_lipschitz = false;
    double ball_u = std::numeric_limits<double>::infinity();
    double ball_ut = std::numeric_limits<double>::infinity();
};

inline double eval_source(const SourceFn& f, double x, double t, double u, double ux, double ut) {
    return f ? f(x, t, u, ux, ut) : 0.0;
}

}  // namespace greenwave
