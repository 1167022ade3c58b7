#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "invlab/cli/commands.hpp"
#include "invlab/cli/config.hpp"

using namespace invlab;

namespace {

// flags may be overridden by INVLAB_-prefixed environment variables
std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"invlab: inviscid-limit verification laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "configuration file (JSON)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
            seed_set = true;
        });
    };

    auto* c_check = app.add_subcommand("check", "run the closed-form verifications");
    add_common(c_check, true);
    auto* c_run = app.add_subcommand("run", "integrate one admissible triple");
    add_common(c_run, true);
    auto* c_sweep = app.add_subcommand("sweep", "run the admissible parameter sweep");
    add_common(c_sweep, true);
    c_sweep->add_option("--jobs", jobs, "parallel workers");
    auto* c_report = app.add_subcommand("report", "aggregate completed runs");
    c_report->add_option("--out", report_dir, "directory holding runs");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = RunConfig::load(config_path);

        if (out_dir.empty()) out_dir = env_or("INVLAB_OUT", cfg.output.dir);
        if (!seed_set) {
            std::string es = env_or("INVLAB_SEED", "");
            seed = es.empty() ? cfg.seed : std::stoull(es);
        }
        {
            std::string ej = env_or("INVLAB_JOBS", "");
            if (!ej.empty()) jobs = std::stoi(ej);
        }

        if (c_check->parsed()) return cmd_check(cfg, out_dir, seed, std::cout);
        if (c_run->parsed()) return cmd_run(cfg, out_dir, seed, std::cout);
        if (c_sweep->parsed()) return cmd_sweep(cfg, out_dir, seed, jobs, std::cout);
        if (c_report->parsed()) {
            if (report_dir.empty()) report_dir = env_or("INVLAB_OUT", cfg.output.dir);
            return cmd_report(report_dir, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
