#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bdp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"birth-death process laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed_override = -1;

    const char* names[] = {"classify", "resolvent", "approx", "simulate", "distance", "mc"};
    const char* blurbs[] = {"boundary classification and admissibility",
                            "resolvent field tables",
                            "approximation scheme convergence reports",
                            "trajectory simulation to path CSV files",
                            "distances between two stored paths",
                            "Monte-Carlo convergence experiments"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory (default ./out)");
        sub->add_option("--seed", seed_override, "master seed override");
    }

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    try {
        bdp::ConfigMap cfg = bdp::read_config_file(config_path);
        bdp::ExperimentPlan plan = bdp::make_plan(cfg, command);
        if (!out_dir.empty()) plan.out_dir = out_dir;
        if (const char* env = std::getenv("BDP_SEED")) plan.mc_seed = std::strtoull(env, nullptr, 10);
        if (seed_override >= 0) plan.mc_seed = static_cast<std::uint64_t>(seed_override);
        return bdp::run_plan(plan, std::cout, std::cerr);
    } catch (const bdp::Error& e) {
        std::cerr << "bdp " << command << ": " << e.what() << '\n';
        return 1;
    }
}
