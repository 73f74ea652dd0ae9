#include "greenwave/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "greenwave/audit.hpp"
#include "greenwave/parallel.hpp"
#include "greenwave/physics.hpp"

namespace greenwave {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot open output file " + (dir / name).string());
    os.precision(17);
    return os;
}

}  // namespace

int run_solve(const SolveConfig& cfg, const RunOptions& opt) {
    SolveOptions so = cfg.options;
    so.threads = opt.threads;
    const SolveResult res = solve(cfg.problem, so);

    const fs::path dir(cfg.out_dir);
    {
        std::ofstream os = open_out(dir, "snapshots.csv");
        os << "t,x,u,u_x,u_t\n";
        const Trajectory& tr = res.trajectory;
        const std::vector<double> xs = tr.grid.points();
        for (int i = 0; i < tr.levels(); ++i) {
            if (i % cfg.snapshot_stride != 0 && i != tr.levels() - 1) continue;
            for (size_t j = 0; j < xs.size(); ++j)
                os << tr.times[i] << ',' << xs[j] << ',' << tr.u[i][j] << ',' << tr.ux[i][j]
                   << ',' << tr.ut[i][j] << '\n';
        }
    }
    {
        std::ofstream os = open_out(dir, "iterations.csv");
        os << "k,weighted_norm,ratio\n";
        for (const auto& r : res.log) os << r.k << ',' << r.weighted << ',' << r.ratio << '\n';
    }
    {
        std::ofstream os = open_out(dir, "certificate.json");
        nlohmann::json j{{"lambda", res.certificate.lambda},
                         {"mu", res.certificate.mu},
                         {"factor", res.certificate.factor},
                         {"valid", res.certificate.valid},
                         {"M_prime", res.certificate.M_prime},
                         {"kappa", res.certificate.kappa},
                         {"Theta", res.certificate.Theta}};
        os << j.dump(2) << '\n';
    }
    if (res.trajectory.bc == BcKind::Periodic) {
        std::ofstream os = open_out(dir, "winding.csv");
        os << "level,t,winding,deviation\n";
        for (int i = 0; i < res.trajectory.levels(); ++i) {
            if (i % cfg.snapshot_stride != 0 && i != res.trajectory.levels() - 1) continue;
            os << i << ',' << res.trajectory.times[i] << ',' << res.trajectory.winding << ','
               << winding_deviation(res.trajectory, i) << '\n';
        }
    }
    if (!opt.quiet) {
        std::cout << "solve: " << res.iterations << " iterations, "
                  << (res.converged ? "converged" : "NOT converged")
                  << ", certificate factor " << res.certificate.factor
                  << (res.certificate.valid ? "" : " (no contraction certificate)")
                  << (res.ball_exceeded ? ", WARNING: iterate left the Lipschitz ball" : "")
                  << '\n';
    }
    return kOk;
}

int run_audit(const AuditConfig& cfg, const RunOptions& opt) {
    AuditReport report;
    const std::vector<double> t_full = logspace(cfg.t_min, cfg.t_max, cfg.t_count);
    const std::vector<double> t_short = logspace(cfg.t_min, cfg.t_max, cfg.prop1_t_count);
    const int threads = resolve_threads(opt.threads);

    auto wants = [&cfg](const std::string& k) {
        return std::find(cfg.kinds.begin(), cfg.kinds.end(), k) != cfg.kinds.end();
    };

    for (double a : cfg.a_values) {
        for (double eps : cfg.eps_values) {
            const EquationParams params{a, eps, 1.0};
            if (wants("lemma")) {
                LemmaAuditOptions lo;
                lo.n_min = cfg.n_min;
                lo.n_max = cfg.n_max;
                lo.t_grid = t_full;
                lo.corrupt_scale = cfg.corrupt_scale;
                lo.threads = threads;
                report.merge(audit_lemma(params, lo));
            }
            if (wants("prop1")) {
                Prop1AuditOptions po;
                po.t_grid = t_short;
                po.n_modes = cfg.n_modes;
                po.x_points = cfg.x_points;
                po.threads = threads;
                report.merge(audit_prop1(params, po));
            }
            if (wants("prop2")) {
                const SpaceGrid grid = SpaceGrid::periodic(64);
                std::vector<double> g(grid.num_points());
                for (int j = 0; j < grid.num_points(); ++j)
                    g[j] = std::cos(grid.point(j)) + 0.3 * std::sin(2.0 * grid.point(j));
                Prop2AuditOptions po;
                po.t_seq = cfg.prop2_t;
                po.threads = threads;
                report.merge(audit_prop2(params, g, grid, Basis::ComplexExp, po));
            }
        }
    }
    if (wants("ode")) {
        KernelOdeAuditOptions ko;
        ko.tuples = cfg.tuples;
        ko.seed = opt.seed;
        report.merge(audit_kernel_ode(ko));
    }

    {
        std::ofstream os = open_out(fs::path(cfg.out_dir), "audit.csv");
        write_audit_csv(os, report);
    }
    if (!opt.quiet) {
        long checked = 0, failed = 0;
        for (const auto& s : report.summaries) {
            checked += s.checked;
            failed += s.failed;
        }
        std::cout << "audit: " << checked << " checks, " << failed << " failures\n";
    }
    return report.all_pass() ? kOk : kAuditFailed;
}

int run_from_file(const std::string& config_path, const std::string& mode,
                  const RunOptions& opt) {
    auto complain = [&opt](const std::string& msg) {
        if (!opt.quiet) std::cerr << "greenwave: " << msg << '\n';
    };
    nlohmann::json doc;
    {
        std::ifstream is(config_path);
        if (!is) {
            complain("cannot open config file " + config_path);
            return kConfigError;
        }
        try {
            is >> doc;
        } catch (const std::exception& e) {
            complain(std::string("config parse: ") + e.what());
            return kConfigError;
        }
    }
    try {
        const LoadedConfig lc = load_config(doc);
        if (mode == "solve") {
            if (!lc.solve) {
                complain("config has no solve sections (equation/solver)");
                return kConfigError;
            }
            return run_solve(*lc.solve, opt);
        }
        if (mode == "audit") return run_audit(*lc.audit, opt);
        complain("unknown mode '" + mode + "' (expected solve | audit)");
        return kConfigError;
    } catch (const ConfigError& e) {
        complain(e.what());
        return kConfigError;
    } catch (const MatchingViolation& e) {
        complain(e.what());
        return kMatchingViolation;
    } catch (const IterationDiverged& e) {
        complain(e.what());
        return kIterationDiverged;
    } catch (const std::exception& e) {
        complain(e.what());
        return kConfigError;
    }
}

}  // namespace greenwave
