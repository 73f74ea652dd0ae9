#include <string>

#include <CLI11.hpp>

#include "greenwave/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"greenwave: spectral Green-function solver for the third-order "
                 "dissipative wave equation"};
    std::string config_path;
    std::string mode = "solve";
    greenwave::RunOptions opt;
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--mode", mode, "solve | audit")
        ->check(CLI::IsMember({"solve", "audit"}));
    app.add_option("--threads", opt.threads, "worker threads (0 = auto)");
    app.add_option("--seed", opt.seed, "seed for randomized audit tuples");
    app.add_flag("--quiet", opt.quiet, "suppress progress output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : greenwave::kConfigError;
    }
    return greenwave::run_from_file(config_path, mode, opt);
}
