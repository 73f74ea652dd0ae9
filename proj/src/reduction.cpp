#include "greenwave/reduction.hpp"

#include <cmath>
#include <sstream>

#include "greenwave/spectral.hpp"

namespace greenwave {

namespace {

constexpr double kPi = constants::pi;

double fd_deriv(const SpaceFn& f, double x, double lo, double hi) {
    // 4th-order stencil, one-sided at the domain ends
    const double h = 1e-4 * std::max(1.0, hi - lo);
    if (x - 2 * h >= lo && x + 2 * h <= hi)
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    const int s = (x - 2 * h < lo) ? 1 : -1;
    return s *
           (-25 * f(x) + 48 * f(x + s * h) - 36 * f(x + s * 2 * h) + 16 * f(x + s * 3 * h) -
            3 * f(x + s * 4 * h)) /
           (12 * h);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

PointMap identity_map() {
    return [](double, double, const PointValues& v) { return v; };
}

PointMap compose(PointMap inner, PointMap outer) {
    return [inner = std::move(inner), outer = std::move(outer)](double x, double t,
                                                                const PointValues& v) {
        return outer(x, t, inner(x, t, v));
    };
}

MatchingViolation::MatchingViolation(std::vector<MatchingEntry> entries)
    : std::runtime_error([&entries] {
          std::string msg = "matching conditions violated:";
          for (const auto& e : entries)
              msg += " " + e.name + " (|" + fmt(e.lhs) + " - " + fmt(e.rhs) + "|)";
          return msg;
      }()),
      entries_(std::move(entries)) {}

namespace {

void check_matching(const ProblemSpec& p, double tol) {
    std::vector<MatchingEntry> bad;
    auto require = [&](const std::string& name, double lhs, double rhs) {
        if (std::abs(lhs - rhs) > tol) bad.push_back({name, lhs, rhs});
    };
    if (const auto* d = std::get_if<DirichletBC>(&p.bc)) {
        require("h0(0)=u0(0)", d->h0.value(0.0), p.u0(0.0));
        require("h0'(0)=u1(0)", d->h0.deriv(0.0), p.u1(0.0));
        require("hpi(0)=u0(pi)", d->hpi.value(0.0), p.u0(kPi));
        require("hpi'(0)=u1(pi)", d->hpi.deriv(0.0), p.u1(kPi));
    } else if (const auto* nb = std::get_if<NeumannBC>(&p.bc)) {
        auto dx0 = [&](const SpaceFn& f, const SpaceFn& fx) {
            return fx ? fx(0.0) : fd_deriv(f, 0.0, 0.0, kPi);
        };
        auto dxpi = [&](const SpaceFn& f, const SpaceFn& fx) {
            return fx ? fx(kPi) : fd_deriv(f, kPi, 0.0, kPi);
        };
        require("k0(0)=u0'(0)", nb->k0.value(0.0), dx0(p.u0, p.u0_x));
        require("k0'(0)=u1'(0)", nb->k0.deriv(0.0), dx0(p.u1, p.u1_x));
        require("kpi(0)=u0'(pi)", nb->kpi.value(0.0), dxpi(p.u0, p.u0_x));
        require("kpi'(0)=u1'(pi)", nb->kpi.deriv(0.0), dxpi(p.u1, p.u1_x));
    } else {
        const auto& pb = std::get<PeriodicBC>(p.bc);
        const double target = constants::two_pi * pb.m;
        for (double x : {0.0, 0.7, 1.9, 3.1, 5.2})
            require("u0 winding at x=" + fmt(x), p.u0(x + constants::two_pi) - p.u0(x), target);
        for (double x : {0.4, 2.6, 4.8})
            require("u1 periodic at x=" + fmt(x), p.u1(x + constants::two_pi), p.u1(x));
        if (p.f) {
            // compatibility: f(x+2pi, t, u+2pi m, ux, ut) = f(x, t, u, ux, ut)
            const double probes[][5] = {{0.3, 0.1, 0.4, -0.2, 0.6},
                                        {2.1, 1.7, -1.1, 0.8, -0.3},
                                        {4.9, 0.9, 2.5, -1.4, 0.2}};
            for (const auto& q : probes)
                require("f compatibility", p.f(q[0] + constants::two_pi, q[1],
                                               q[2] + constants::two_pi * pb.m, q[3], q[4]),
                        p.f(q[0], q[1], q[2], q[3], q[4]));
        }
    }
    if (!bad.empty()) throw MatchingViolation(std::move(bad));
}

}  // namespace

HomogenizeResult homogenize(const ProblemSpec& p, double tol_match) {
    validate(p.params);
    check_matching(p, tol_match);

    HomogenizeResult out;
    out.canonical = p;
    const double a = p.params.a, c2 = p.params.c * p.params.c, eps = p.params.eps;

    if (const auto* pb = std::get_if<PeriodicBC>(&p.bc)) {
        const int m = pb->m;
        out.winding = m;
        out.canonical.bc = PeriodicBC{0};
        if (m == 0) {
            out.lift = identity_map();
            return out;
        }
        // u^ = u - m x (phi_m = m x, so no phi'' source term); the u and u_x
        // arguments of f shift back by m x and m.
        const SpaceFn u0 = p.u0, u1 = p.u1;
        out.canonical.u0 = [u0, m](double x) { return u0(x) - m * x; };
        out.canonical.u1 = u1;
        if (p.u0_x) {
            const SpaceFn u0x = p.u0_x;
            out.canonical.u0_x = [u0x, m](double x) { return u0x(x) - m; };
        }
        if (p.f) {
            const SourceFn f = p.f;
            out.canonical.f = [f, m](double x, double t, double u, double ux, double ut) {
                return f(x, t, u + m * x, ux + m, ut);
            };
        }
        out.lift = [m](double x, double, const PointValues& v) {
            return PointValues{v.u + m * x, v.ux + m, v.ut};
        };
        return out;
    }

    // DBC / NBC: u^ = u + psi with psi built from the boundary signals;
    // L psi feeds the source, psi(.,0) and psi_t(.,0) feed the initial data.
    struct Psi {
        TimeSignal s0, s1;
        bool quadratic;  // false: DBC (linear in x), true: NBC
        double val(double x, double t) const {
            const double w0 = quadratic ? x * x / (2 * kPi) - x : x / kPi - 1.0;
            const double w1 = quadratic ? x * x / (2 * kPi) : x / kPi;
            return w0 * s0.value(t) - w1 * s1.value(t);
        }
        double dx(double x, double t) const {
            const double w0 = quadratic ? x / kPi - 1.0 : 1.0 / kPi;
            const double w1 = quadratic ? x / kPi : 1.0 / kPi;
            return w0 * s0.value(t) - w1 * s1.value(t);
        }
        double dt(double x, double t) const {
            const double w0 = quadratic ? x * x / (2 * kPi) - x : x / kPi - 1.0;
            const double w1 = quadratic ? x * x / (2 * kPi) : x / kPi;
            return w0 * s0.deriv(t) - w1 * s1.deriv(t);
        }
        double dxx_combo(double t, double eps_, double c2_) const {
            // c^2 d_xx(eps psi_t + psi): zero for the linear lift, constant
            // (s0 - s1)/pi for the quadratic one
            if (!quadratic) return 0.0;
            return c2_ * (eps_ * (s0.deriv(t) - s1.deriv(t)) + s0.value(t) - s1.value(t)) / kPi;
        }
        double L(double x, double t, double a_, double eps_, double c2_) const {
            const double w0 = quadratic ? x * x / (2 * kPi) - x : x / kPi - 1.0;
            const double w1 = quadratic ? x * x / (2 * kPi) : x / kPi;
            return w0 * (s0.deriv2(t) + a_ * s0.deriv(t)) -
                   w1 * (s1.deriv2(t) + a_ * s1.deriv(t)) - dxx_combo(t, eps_, c2_);
        }
    };

    auto psi = std::make_shared<Psi>();
    if (const auto* d = std::get_if<DirichletBC>(&p.bc)) {
        psi->s0 = d->h0;
        psi->s1 = d->hpi;
        psi->quadratic = false;
        out.canonical.bc = DirichletBC{TimeSignal::zero(), TimeSignal::zero()};
    } else {
        const auto& nb = std::get<NeumannBC>(p.bc);
        psi->s0 = nb.k0;
        psi->s1 = nb.kpi;
        psi->quadratic = true;
        out.canonical.bc = NeumannBC{TimeSignal::zero(), TimeSignal::zero()};
    }
    if (psi->s0.is_zero() && psi->s1.is_zero()) {
        out.lift = identity_map();
        return out;
    }

    const SpaceFn u0 = p.u0, u1 = p.u1;
    out.canonical.u0 = [u0, psi](double x) { return u0(x) + psi->val(x, 0.0); };
    out.canonical.u1 = [u1, psi](double x) { return u1(x) + psi->dt(x, 0.0); };
    out.canonical.u0_x = nullptr;
    out.canonical.u1_x = nullptr;
    const SourceFn f = p.f;
    out.canonical.f = [f, psi, a, eps, c2](double x, double t, double u, double ux, double ut) {
        const double base =
            f ? f(x, t, u - psi->val(x, t), ux - psi->dx(x, t), ut - psi->dt(x, t)) : 0.0;
        return base + psi->L(x, t, a, eps, c2);
    };
    out.lift = [psi](double x, double t, const PointValues& v) {
        return PointValues{v.u - psi->val(x, t), v.ux - psi->dx(x, t), v.ut - psi->dt(x, t)};
    };
    return out;
}

DampingResult normalize_damping(const ProblemSpec& p) {
    validate(p.params);
    const double a = p.params.a;
    if (!(a < 0.0))
        throw std::invalid_argument("normalize_damping: only defined for a < 0");
    if (const auto* pb = std::get_if<PeriodicBC>(&p.bc); pb && pb->m != 0)
        throw std::invalid_argument("normalize_damping: homogenize winding first (m != 0)");

    const double eps = p.params.eps;
    const double shrink = 1.0 - 0.5 * a * eps;  // > 1 for a < 0
    const double cs = std::sqrt(shrink);

    DampingResult out;
    out.canonical = p;
    out.canonical.params.a = 0.0;
    out.canonical.params.eps = eps / shrink;
    out.canonical.params.c = p.params.c * cs;

    const SpaceFn u0 = p.u0, u1 = p.u1;
    out.canonical.u1 = [u0, u1, a](double x) { return u1(x) + 0.5 * a * u0(x); };
    if (p.u1_x && p.u0_x) {
        const SpaceFn u0x = p.u0_x, u1x = p.u1_x;
        out.canonical.u1_x = [u0x, u1x, a](double x) { return u1x(x) + 0.5 * a * u0x(x); };
    } else {
        out.canonical.u1_x = nullptr;
    }
    // f~(x,t,v,vx,vt) = (a^2/4) v + e^{at/2} f(x,t, e^{-at/2} v, e^{-at/2} vx,
    //                                           e^{-at/2} (vt - (a/2) v))
    const SourceFn f = p.f;
    out.canonical.f = [f, a](double x, double t, double v, double vx, double vt) {
        if (!f) return 0.25 * a * a * v;
        const double back = std::exp(-0.5 * a * t);
        const double base = f(x, t, back * v, back * vx, back * (vt - 0.5 * a * v));
        return 0.25 * a * a * v + std::exp(0.5 * a * t) * base;
    };
    // conservative Lipschitz constant for the transformed source
    out.canonical.mu = p.mu * (1.0 + 0.5 * std::abs(a) * std::max(1.0, 1.0 / cs)) + 0.25 * a * a;

    auto tf = [](const TimeSignal& s, double a_) {
        if (s.is_zero()) return TimeSignal::zero();
        return TimeSignal(
            [s, a_](double t) { return std::exp(-0.5 * a_ * t) * s.value(t); },
            [s, a_](double t) {
                return std::exp(-0.5 * a_ * t) * (s.deriv(t) - 0.5 * a_ * s.value(t));
            },
            [s, a_](double t) {
                return std::exp(-0.5 * a_ * t) *
                       (s.deriv2(t) - a_ * s.deriv(t) + 0.25 * a_ * a_ * s.value(t));
            });
    };
    // v = e^{a t / 2} u = e^{-|a| t / 2} u for a < 0: boundary data scale along
    if (const auto* d = std::get_if<DirichletBC>(&p.bc))
        out.canonical.bc = DirichletBC{tf(d->h0, -a), tf(d->hpi, -a)};
    else if (const auto* nb = std::get_if<NeumannBC>(&p.bc))
        out.canonical.bc = NeumannBC{tf(nb->k0, -a), tf(nb->kpi, -a)};

    out.unmap = [a](double, double t, const PointValues& v) {
        const double grow = std::exp(-0.5 * a * t);
        return PointValues{grow * v.u, grow * v.ux, grow * (v.ut - 0.5 * a * v.u)};
    };
    return out;
}

SpeedResult normalize_speed(const ProblemSpec& p) {
    validate(p.params);
    const double c = p.params.c;
    SpeedResult out;
    out.canonical = p;
    out.domain_scale = 1.0 / c;
    if (c == 1.0) {
        out.unmap = identity_map();
        return out;
    }
    out.canonical.params.c = 1.0;
    const SpaceFn u0 = p.u0, u1 = p.u1;
    out.canonical.u0 = [u0, c](double x) { return u0(c * x); };
    out.canonical.u1 = [u1, c](double x) { return u1(c * x); };
    out.canonical.u0_x = nullptr;
    out.canonical.u1_x = nullptr;
    if (p.f) {
        const SourceFn f = p.f;
        out.canonical.f = [f, c](double x, double t, double v, double vx, double vt) {
            return f(c * x, t, v, vx / c, vt);
        };
    }
    // u(x,t) = v(x/c, t); v_x~ = c u_x
    out.unmap = [c](double, double, const PointValues& v) {
        return PointValues{v.u, v.ux / c, v.ut};
    };
    return out;
}

std::vector<double> extend(const std::vector<double>& field, bool odd, double tol) {
    const int nx = static_cast<int>(field.size()) - 1;
    if (nx < 2) throw std::invalid_argument("extend: need at least 3 samples");
    double scale = 1.0;
    for (double v : field) scale = std::max(scale, std::abs(v));
    if (odd) {
        if (std::abs(field.front()) > tol * scale || std::abs(field.back()) > tol * scale)
            throw ParityViolation("extend: odd extension needs field(0)=field(pi)=0");
    } else {
        const double dx = kPi / nx;
        const double d0 = (-3 * field[0] + 4 * field[1] - field[2]) / (2 * dx);
        const double d1 = (3 * field[nx] - 4 * field[nx - 1] + field[nx - 2]) / (2 * dx);
        // one-sided slopes carry O(dx^2) discretization error of their own
        const double slack = tol * scale + 10.0 * dx * dx * scale;
        if (std::abs(d0) > slack || std::abs(d1) > slack)
            throw ParityViolation("extend: even extension needs vanishing end derivatives");
    }
    return extend_samples(field, odd);
}

CanonicalProblem reduce(const ProblemSpec& p, double tol_match) {
    HomogenizeResult hr = homogenize(p, tol_match);
    ProblemSpec q = hr.canonical;
    PointMap lift = hr.lift;
    if (q.params.a < 0.0) {
        DampingResult dr = normalize_damping(q);
        q = dr.canonical;
        lift = compose(dr.unmap, lift);
    }
    CanonicalProblem cp;
    cp.a = q.params.a;
    cp.eps = q.params.eps;
    cp.freq_scale = q.params.c;  // wave speed folds into nu = c n
    cp.bc = kind_of(q.bc);
    cp.winding = hr.winding;
    cp.u0 = q.u0;
    cp.u1 = q.u1;
    cp.f = q.f;
    cp.mu = q.mu;
    cp.locally_lipschitz = q.locally_lipschitz;
    cp.ball_u = q.ball_u;
    cp.ball_ut = q.ball_ut;
    cp.lift = std::move(lift);
    cp.user_params = p.params;
    return cp;
}

}  // namespace greenwave
