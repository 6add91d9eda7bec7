// turing-passage: simulation and verification toolkit for the slow passage
// through a Turing bifurcation in the dynamic Swift-Hohenberg equation.

#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "tp/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"slow passage through a Turing bifurcation: simulate, approximate, verify"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned long long seed = 0;
    bool seed_set = false;
    int workers = -1;
    int order_override = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (key = value, [sections])");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--workers", workers, "worker threads (0: all cores)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the full equation");
    CLI::App* approx = app.add_subcommand("approx", "run the chartwise modulation passage");
    CLI::App* compare = app.add_subcommand("compare", "solution vs. assembled approximation");
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep experiment");
    CLI::App* derive = app.add_subcommand("derive", "emit the modulation hierarchy document");
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    for (CLI::App* cmd : {simulate, approx, compare, sweep, derive, verify}) add_common(cmd);
    derive->add_option("--order", order_override, "hierarchy order n (4..6)");

    CLI11_PARSE(app, argc, argv);

    std::string command = app.get_subcommands().front()->get_name();
    try {
        tp::ExperimentSpec spec = tp::parse_config(config_path, command);
        if (const char* env = std::getenv("TP_OUT_DIR")) spec.out_dir = env;
        if (!out_dir.empty()) spec.out_dir = out_dir;
        if (seed_set) spec.seed = seed;
        if (workers >= 0) spec.workers = workers;
        if (order_override > 0) spec.order = order_override;
        return tp::run_command(spec).exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
