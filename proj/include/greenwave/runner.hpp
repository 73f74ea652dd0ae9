#pragma once

#include <cstdint>
#include <string>

#include "greenwave/config.hpp"

namespace greenwave {

struct RunOptions {
    int threads = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 1;
    bool quiet = false;
};

/// Exit codes shared with the CLI: 0 ok, 1 audit failures, 2 config error,
/// 3 matching violation, 4 iteration diverged.
enum ExitCode : int {
    kOk = 0,
    kAuditFailed = 1,
    kConfigError = 2,
    kMatchingViolation = 3,
    kIterationDiverged = 4,
};

/// Solves the configured problem and writes snapshots.csv, iterations.csv,
/// certificate.json (and winding.csv for rings) to the output directory.
int run_solve(const SolveConfig& cfg, const RunOptions& opt);

/// Runs the configured audits and writes audit.csv; returns kAuditFailed
/// when any inequality instance fails.
int run_audit(const AuditConfig& cfg, const RunOptions& opt);

/// Loads the config file and dispatches on mode ("solve" | "audit"),
/// mapping every error to the exit codes above (with a stderr diagnostic
/// unless quiet).
int run_from_file(const std::string& config_path, const std::string& mode,
                  const RunOptions& opt);

}  // namespace greenwave
