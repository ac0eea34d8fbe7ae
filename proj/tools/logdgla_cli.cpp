// Command-line front end: reads a JSON config, dispatches to the requested
// computation, and writes a deterministic JSON report.
//
// Exit codes: 0 success, 1 check failure, 2 usage or config error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "logdgla/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact engine for logarithmic-form DGLAs on local models"};
    std::string config_path, out_path;
    long long seed_override = -1;
    double tol_override = -1.0;
    bool quiet = false, with_timings = false;
    app.add_option("--config", config_path, "path to the JSON run config")->required();
    app.add_option("--out", out_path, "write the JSON report here");
    app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--tol", tol_override, "override the config tolerance");
    app.add_flag("--quiet", quiet, "suppress stdout report");
    app.add_flag("--timings", with_timings, "include wall-clock timings in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    logdgla::RunConfig cfg;
    try {
        cfg = logdgla::parse_config(buf.str());
    } catch (const logdgla::config_parse_error& e) {
        logdgla::Json err{{"error", "config"}, {"details", e.errors}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
    if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
    if (tol_override > 0) cfg.tolerance = tol_override;
    if (out_path.empty()) out_path = cfg.out;

    logdgla::RunResult result;
    try {
        result = logdgla::run(cfg, with_timings);
    } catch (const logdgla::config_error& e) {
        logdgla::Json err{{"error", "config"}, {"details", {e.what()}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        logdgla::Json err{{"error", "internal"}, {"details", {e.what()}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    }

    std::string text = result.report.dump(2);
    text.push_back('\n');
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write report to '" << out_path << "'\n";
            return 2;
        }
        out << text;
    }
    if (!quiet) std::cout << text;
    return result.checks_passed ? 0 : 1;
}
