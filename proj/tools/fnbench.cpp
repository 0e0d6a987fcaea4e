#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "fnbo/bench.hpp"

namespace {

fnbo::ExperimentConfig load_config(const std::string& path, long long seed,
                                   const std::string& out_dir, bool single_thread) {
    fnbo::ExperimentConfig cfg =
        path.empty() ? fnbo::ExperimentConfig{}
                     : fnbo::ExperimentConfig::from_toml(fnbo::TomlTable::parse_file(path));
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (single_thread) cfg.threads = 1;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-aware Bayesian optimization benchmarks for function networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    bool single_thread = false;
    app.add_option("--seed", seed, "override the config base seed");
    app.add_option("--out-dir", out_dir, "override the config output directory");
    app.add_flag("--single-thread", single_thread,
                 "run replications sequentially for bitwise reproducibility");

    CLI::App* run = app.add_subcommand("run", "run an algorithm/problem experiment matrix");
    run->add_option("--config", config_path, "TOML experiment config")->required();
    run->fallthrough();

    CLI::App* cmp = app.add_subcommand(
        "compare-optimizers", "time one-shot vs discretized acquisition maximization");
    cmp->add_option("--config", config_path, "TOML experiment config")->required();
    cmp->fallthrough();

    app.add_subcommand("list-problems", "print the registered problem names")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-problems")) {
            for (const std::string& name : fnbo::problem_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        const fnbo::ExperimentConfig cfg =
            load_config(config_path, seed, out_dir, single_thread);
        if (app.got_subcommand("run")) {
            const fnbo::AggregateReport rep = fnbo::run_experiment(cfg);
            std::printf("problem %s, budget %g, %d replication(s)\n", rep.problem.c_str(),
                        rep.budget, cfg.replications);
            for (const fnbo::AlgoCurve& c : rep.curves)
                std::printf("  %-8s final mean metric %.6f, mean run %.1f ms\n", c.algo.c_str(),
                            rep.grid.size() > 0 ? c.mean[rep.grid.size() - 1] : 0.0,
                            c.mean_run_ms);
            std::printf("wrote %s/{aggregate.csv,node_counts.csv,timings.csv,curves.svg}\n",
                        cfg.out_dir.c_str());
        } else {
            const fnbo::CompareReport rep = fnbo::compare_optimizers(cfg);
            std::fputs(rep.to_csv().c_str(), stdout);
            std::printf("wrote %s/optimizer_comparison.csv\n", cfg.out_dir.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
