#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenwave/picard.hpp"
#include "greenwave/problem.hpp"

namespace greenwave {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveConfig {
    ProblemSpec problem;
    SolveOptions options;
    std::string out_dir = "out";
    int snapshot_stride = 1;
};

struct AuditConfig {
    std::vector<std::string> kinds;  // lemma, prop1, prop2, ode
    std::vector<double> a_values{0.0, 0.5, 2.0};
    std::vector<double> eps_values{0.1, 1.0, 5.0};
    int n_min = -200, n_max = 200;
    double t_min = 1e-6, t_max = 50.0;
    int t_count = 200;
    int prop1_t_count = 20;
    int x_points = 64;
    int n_modes = 16384;
    std::vector<double> prop2_t{1e-2, 1e-3, 1e-4};
    int tuples = 50;
    double corrupt_scale = 1.0;
    std::string out_dir = "out";
};

struct LoadedConfig {
    std::optional<SolveConfig> solve;
    std::optional<AuditConfig> audit;
};

/// Parses and validates the configuration document; throws ConfigError with
/// a field path on any problem.
LoadedConfig load_config(const nlohmann::json& doc);

std::vector<double> logspace(double lo, double hi, int count);

}  // namespace greenwave
