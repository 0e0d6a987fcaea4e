#pragma once

#include "fnbo/bo.hpp"
#include "fnbo/toml.hpp"

namespace fnbo {

/// One benchmark experiment: a problem, a set of algorithms, replications.
struct ExperimentConfig {
    std::string problem = "toy_1d";
    std::vector<std::string> algorithms = {"pkgfn"};
    double budget = -1.0;       // <= 0 takes the problem default
    int replications = 1;
    std::uint64_t seed = 0;
    std::vector<double> costs;  // per-node override, empty keeps defaults
    double noise = -1.0;        // observation noise std, < 0 keeps defaults

    int I = 8;
    int J = 64;
    int n_thompson = 10;   // N_T
    int n_local = 10;      // N_L
    double local_radius = 0.1;  // r
    std::string model_mode = "networked";  // or "blackbox"
    std::string out_dir = "out";

    int raw_per_dim = 100;
    int starts_per_dim = 10;
    int ascent_iters = 60;
    int fit_restarts = 2;
    bool qmc = true;
    bool antithetic = false;
    bool charge_init = false;
    int threads = 1;  // worker threads across (algorithm, replication) pairs

    int score_I = 512;  // common high-precision re-scoring estimator
    int score_J = 128;

    // optimizer-comparison grid (design sizes x fantasy counts x inner-set sizes)
    std::vector<int> compare_snapshots = {5, 10, 15};
    std::vector<int> compare_I = {2, 4, 8};
    std::vector<int> compare_A = {11, 21, 41};

    static ExperimentConfig from_toml(const TomlTable& t);
    std::string to_toml() const;
    /// Throws invalid_argument naming the offending key.
    void validate() const;
    LoopConfig loop_config(std::uint64_t run_seed) const;
};

/// Mean +- 2 SE metric curves on the union spend grid, per algorithm.
struct AlgoCurve {
    std::string algo;
    Vec mean, se;        // one entry per grid point
    Vec node_means;      // mean post-init evaluation count per node
    double mean_run_ms = 0.0;
    double mean_iter_ms = 0.0;
};

struct AggregateReport {
    std::string problem;
    double budget = 0.0;
    Vec grid;  // union of spend points over all runs
    std::vector<AlgoCurve> curves;
    std::vector<std::vector<RunRecord>> runs;  // [algorithm][replication]

    std::string aggregate_csv() const;    // algo,spent,mean_metric,se_metric
    std::string node_counts_csv() const;  // algo,node,mean_count
    std::string timings_csv() const;      // algo,mean_run_ms,mean_iter_ms
    std::string curves_svg() const;
};

/// Runs the full matrix with shared initial designs per replication and, when
/// out_dir is nonempty, writes runs/<algo>_<rep>.csv, aggregate.csv,
/// node_counts.csv, timings.csv and curves.svg.
AggregateReport run_experiment(const ExperimentConfig& cfg);

/// One acquisition-maximization timing cell on a fixed design snapshot.
struct CompareRow {
    int snapshot = 0;  // design size
    int I = 0;
    std::string method;  // "one_shot" or "discretization"
    int A = 0;           // inner-set size, 0 for one_shot
    double value = 0.0;  // re-scored with the common estimator
    double wall_ms = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    std::string to_csv() const;  // snapshot,I,method,A,value,wall_ms
};

/// Times and scores one-shot vs discretized maximization of the first node's
/// acquisition on 5/10/15-point design snapshots, I in {2,4,8} and
/// |A| in {11,21,41}; writes optimizer_comparison.csv when out_dir is set.
CompareReport compare_optimizers(const ExperimentConfig& cfg);

}  // namespace fnbo
