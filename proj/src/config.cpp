#include "greenwave/config.hpp"

#include <cmath>

#include "greenwave/expression.hpp"
#include "greenwave/physics.hpp"

namespace greenwave {

std::vector<double> logspace(double lo, double hi, int count) {
    if (count < 1 || !(lo > 0.0) || !(hi > lo))
        throw ConfigError("logspace: need count >= 1 and 0 < lo < hi");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double la = std::log10(lo), lb = std::log10(hi);
    for (int i = 0; i < count; ++i)
        out[i] = std::pow(10.0, la + (lb - la) * i / (count - 1));
    return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

double get_num(const json& j, const std::string& path, const char* key,
               std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        bad(path + "." + key, "missing required number");
    }
    if (!j[key].is_number()) bad(path + "." + key, "expected a number");
    return j[key].get<double>();
}

SpaceFn load_space_fn(const json& j, const std::string& path) {
    if (j.is_string() || (j.is_object() && j.contains("expr"))) {
        const std::string text = j.is_string() ? j.get<std::string>()
                                               : j["expr"].get<std::string>();
        try {
            return space_fn_from_expression(text);
        } catch (const std::exception& e) {
            bad(path, e.what());
        }
    }
    if (j.is_object() && j.contains("table")) {
        const json& tb = j["table"];
        if (!tb.contains("x") || !tb.contains("v")) bad(path + ".table", "need x and v arrays");
        std::vector<double> xs = tb["x"].get<std::vector<double>>();
        std::vector<double> vs = tb["v"].get<std::vector<double>>();
        try {
            // one-dimensional cubic spline; TimeSignal already implements it
            TimeSignal s = TimeSignal::from_samples(std::move(xs), std::move(vs));
            return [s](double x) { return s.value(x); };
        } catch (const std::exception& e) {
            bad(path + ".table", e.what());
        }
    }
    bad(path, "expected an expression string, {expr: ...} or {table: ...}");
}

TimeSignal load_signal(const json& j, const std::string& path) {
    if (j.is_null()) return TimeSignal::zero();
    if (j.is_string() || (j.is_object() && j.contains("expr"))) {
        const std::string text = j.is_string() ? j.get<std::string>()
                                               : j["expr"].get<std::string>();
        try {
            return time_signal_from_expression(text);
        } catch (const std::exception& e) {
            bad(path, e.what());
        }
    }
    if (j.is_object() && j.contains("table")) {
        const json& tb = j["table"];
        if (!tb.contains("t") || !tb.contains("v")) bad(path + ".table", "need t and v arrays");
        try {
            return TimeSignal::from_samples(tb["t"].get<std::vector<double>>(),
                                            tb["v"].get<std::vector<double>>());
        } catch (const std::exception& e) {
            bad(path + ".table", e.what());
        }
    }
    bad(path, "expected an expression string, {expr: ...} or {table: ...}");
}

SolveConfig load_solve(const json& doc) {
    SolveConfig sc;
    if (!doc.contains("equation")) bad("equation", "missing section");
    const json& eq = doc["equation"];
    sc.problem.params.a = get_num(eq, "equation", "a", 0.0);
    sc.problem.params.eps = get_num(eq, "equation", "eps");
    sc.problem.params.c = get_num(eq, "equation", "c", 1.0);
    try {
        validate(sc.problem.params);
    } catch (const std::exception& e) {
        bad("equation", e.what());
    }

    if (!doc.contains("bc")) bad("bc", "missing section");
    const json& bc = doc["bc"];
    const std::string kind = bc.value("kind", "");
    int winding_m = 0;
    if (kind == "periodic") {
        winding_m = static_cast<int>(get_num(bc, "bc", "m", 0.0));
        sc.problem.bc = PeriodicBC{winding_m};
    } else if (kind == "dirichlet") {
        sc.problem.bc = DirichletBC{load_signal(bc.value("h0", json()), "bc.h0"),
                                    load_signal(bc.value("hpi", json()), "bc.hpi")};
    } else if (kind == "neumann") {
        sc.problem.bc = NeumannBC{load_signal(bc.value("k0", json()), "bc.k0"),
                                  load_signal(bc.value("kpi", json()), "bc.kpi")};
    } else {
        bad("bc.kind", "expected periodic | dirichlet | neumann, got '" + kind + "'");
    }

    if (!doc.contains("initial")) bad("initial", "missing section");
    sc.problem.u0 = load_space_fn(doc["initial"].value("u0", json("0")), "initial.u0");
    sc.problem.u1 = load_space_fn(doc["initial"].value("u1", json("0")), "initial.u1");

    if (doc.contains("source")) {
        const json& src = doc["source"];
        const std::string preset = src.value("preset", "");
        if (preset == "josephson") {
            JosephsonConfig jc;
            jc.b = get_num(src, "source", "b", 1.0);
            jc.gamma = get_num(src, "source", "gamma", 0.0);
            jc.a = sc.problem.params.a;
            jc.eps = sc.problem.params.eps;
            jc.c = sc.problem.params.c;
            const std::string variant = src.value("variant", "basic");
            if (variant == "extended")
                jc.variant = JosephsonConfig::Variant::Extended;
            else if (variant != "basic")
                bad("source.variant", "expected basic | extended");
            if (kind == "periodic") {
                jc.geometry = JosephsonConfig::Geometry::Ring;
                jc.m = winding_m;
            } else if (kind == "neumann") {
                jc.geometry = JosephsonConfig::Geometry::Strip;
            } else {
                bad("source", "josephson preset needs periodic or neumann bc");
            }
            try {
                ProblemSpec jp = josephson_problem(jc, sc.problem.u0, sc.problem.u1);
                jp.bc = sc.problem.bc;  // keep user-loaded signals (zero by default)
                sc.problem = std::move(jp);
            } catch (const MatchingViolation&) {
                throw;
            } catch (const std::exception& e) {
                bad("source", e.what());
            }
        } else if (preset == "voigt") {
            VoigtConfig vc;
            vc.E = get_num(src, "source", "E", 1.0);
            vc.rho = get_num(src, "source", "rho", 1.0);
            vc.mu_v = get_num(src, "source", "mu_v", 1.0);
            if (src.contains("force")) {
                SourceFn sf;
                try {
                    sf = source_from_expression(src["force"].is_string()
                                                    ? src["force"].get<std::string>()
                                                    : src["force"].value("expr", ""));
                } catch (const std::exception& e) {
                    bad("source.force", e.what());
                }
                vc.force = [sf](double x, double t) { return sf(x, t, 0, 0, 0); };
            }
            try {
                sc.problem = voigt_problem(vc, sc.problem.u0, sc.problem.u1, sc.problem.bc);
            } catch (const std::exception& e) {
                bad("source", e.what());
            }
        } else if (src.contains("expr")) {
            try {
                Expression e = Expression::parse(src["expr"].get<std::string>());
                sc.problem.f = source_from_expression(src["expr"].get<std::string>());
                if (e.depends_on_state() && !src.contains("mu"))
                    bad("source.mu",
                        "a state-dependent expression source needs an explicit mu");
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                bad("source.expr", e.what());
            }
            sc.problem.mu = get_num(src, "source", "mu", 0.0);
        } else if (!preset.empty()) {
            bad("source.preset", "expected josephson | voigt");
        }
    }

    if (!doc.contains("solver")) bad("solver", "missing section");
    const json& sv = doc["solver"];
    sc.options.T = get_num(sv, "solver", "T");
    sc.options.dt = get_num(sv, "solver", "dt");
    sc.options.N = static_cast<int>(get_num(sv, "solver", "N"));
    sc.options.stop_tol = get_num(sv, "solver", "stop_tol", 1e-10);
    sc.options.k_max = static_cast<int>(get_num(sv, "solver", "k_max", 200.0));
    if (sv.contains("lambda") && !sv["lambda"].is_null())
        sc.options.lambda = get_num(sv, "solver", "lambda");
    if (!(sc.options.T > 0.0) || !(sc.options.dt > 0.0) || sc.options.N < 1)
        bad("solver", "need T > 0, dt > 0, N >= 1");

    if (doc.contains("output")) {
        sc.out_dir = doc["output"].value("dir", "out");
        sc.snapshot_stride =
            std::max(1, static_cast<int>(get_num(doc["output"], "output", "snapshot_stride", 1.0)));
    }
    return sc;
}

AuditConfig load_audit(const json& doc) {
    AuditConfig ac;
    const json a = doc.value("audit", json::object());
    if (a.contains("kinds"))
        ac.kinds = a["kinds"].get<std::vector<std::string>>();
    else
        ac.kinds = {"lemma", "prop1", "prop2", "ode"};
    for (const auto& k : ac.kinds)
        if (k != "lemma" && k != "prop1" && k != "prop2" && k != "ode")
            bad("audit.kinds", "unknown audit kind '" + k + "'");
    if (a.contains("a_values")) ac.a_values = a["a_values"].get<std::vector<double>>();
    if (a.contains("eps_values")) ac.eps_values = a["eps_values"].get<std::vector<double>>();
    ac.n_min = static_cast<int>(get_num(a, "audit", "n_min", -200.0));
    ac.n_max = static_cast<int>(get_num(a, "audit", "n_max", 200.0));
    ac.t_min = get_num(a, "audit", "t_min", 1e-6);
    ac.t_max = get_num(a, "audit", "t_max", 50.0);
    ac.t_count = static_cast<int>(get_num(a, "audit", "t_count", 200.0));
    ac.prop1_t_count = static_cast<int>(get_num(a, "audit", "prop1_t_count", 20.0));
    ac.x_points = static_cast<int>(get_num(a, "audit", "x_points", 64.0));
    ac.n_modes = static_cast<int>(get_num(a, "audit", "n_modes", 16384.0));
    if (a.contains("prop2_t")) ac.prop2_t = a["prop2_t"].get<std::vector<double>>();
    ac.tuples = static_cast<int>(get_num(a, "audit", "tuples", 50.0));
    ac.corrupt_scale = get_num(a, "audit", "corrupt_scale", 1.0);
    if (doc.contains("output")) ac.out_dir = doc["output"].value("dir", "out");

    if (ac.kinds.empty() || ac.a_values.empty() || ac.eps_values.empty() || ac.t_count < 1 ||
        ac.n_min > ac.n_max || ac.prop1_t_count < 1 || ac.tuples < 1)
        bad("audit", "empty sweep");
    for (double e : ac.eps_values)
        if (!(e > 0.0)) bad("audit.eps_values", "eps must be > 0");
    for (double v : ac.a_values)
        if (v < 0.0) bad("audit.a_values", "lemma/prop1 audits need a >= 0");
    return ac;
}

}  // namespace

LoadedConfig load_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config error: document is not a JSON object");
    LoadedConfig lc;
    if (doc.contains("equation") || doc.contains("solver")) lc.solve = load_solve(doc);
    lc.audit = load_audit(doc);
    return lc;
}

}  // namespace greenwave
