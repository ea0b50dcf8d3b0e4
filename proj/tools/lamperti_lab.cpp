// Config-driven scenario runner for the measure-valued population toolkit.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lamperti/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{ "lamperti-lab: simulation and verification of self-similar "
                  "measure-valued populations, coalescents and their duals" };
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string variant;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t replicas = 0;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* sub, bool with_variant = false) {
        sub->add_option("--config", config_path, "config file (JSON)")->required();
        sub->add_option("--seed", seed, "root seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--replicas", replicas, "replica count (overrides config)");
        sub->add_option("--threads", threads, "worker threads (overrides config)");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        if (with_variant) sub->add_option("--variant", variant, "subcommand variant");
    };

    add_common(app.add_subcommand("simulate-coalescent", "coalescent event paths"));
    add_common(app.add_subcommand("simulate-levy", "log-mass Levy paths"));
    add_common(app.add_subcommand("simulate-population",
                                  "population paths (smh|poissonian|dw|ss)"),
               true);
    add_common(app.add_subcommand("simulate-dual", "coupled dual paths"));
    add_common(app.add_subcommand("lamperti", "time changes (c|gamma|roundtrip)"), true);
    add_common(app.add_subcommand("check-generators", "operator-duality battery"));
    add_common(app.add_subcommand("check-duality", "forward/dual duality battery"));
    add_common(app.add_subcommand("check-fv-duality", "frequency/coalescent duality"));
    add_common(app.add_subcommand("check-scaling", "self-similarity checks"));

    CLI11_PARSE(app, argc, argv);

    try {
        lamperti::RunConfig cfg = lamperti::load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (replicas > 0) cfg.replicas = replicas;
        if (threads > 0) cfg.threads = threads;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        std::string command = app.get_subcommands().front()->get_name();
        return lamperti::run_command(command, variant, cfg);
    } catch (const lamperti::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
