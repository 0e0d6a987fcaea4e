#pragma once

#include "fnbo/acq_opt.hpp"
#include "fnbo/problems.hpp"

namespace fnbo {

enum class Algo { pkgfn, eifn, kgfn, tsfn, ei, kg, random };

std::string algo_name(Algo a);
Algo algo_from_name(const std::string& s);
std::vector<Algo> all_algos();

/// Everything a single optimization run needs besides the problem itself.
struct LoopConfig {
    int I = 8;   // outer fantasy count
    int J = 64;  // inner path-sample count
    bool qmc = true;
    bool antithetic = false;
    InnerSetConfig inner;      // inner discretization set A
    MultiStartConfig acq_ms;   // acquisition maximization budget
    MultiStartConfig rec_ms;   // recommendation ascent budget
    int fit_restarts = 2;
    bool charge_init = false;     // count the initial design against the budget
    bool blackbox_metric = false; // ei/kg/random recommend from a plain GP on (x, y_K)
    std::uint64_t seed = 0;
};

/// One row per evaluation event; row 0 is the post-initialization state.
struct IterRow {
    int iter = 0;
    int node = -1;  // -1 for a full network evaluation (or the initial row)
    double cost = 0.0;
    double spent = 0.0;
    double metric = 0.0;   // ground-truth composite at the recommendation
    double nu_star = 0.0;  // model's posterior-mean estimate at the recommendation
    double wall_ms = 0.0;
};

struct RunRecord {
    std::string algo;
    std::vector<IterRow> rows;
    std::vector<int> node_counts;  // per-node evaluations, initial design excluded
    Vec x_rec;                     // final recommendation
    double nu_rec = 0.0;
    double metric_rec = 0.0;
    bool aborted = false;

    std::string to_csv() const;
};

/// `count` uniform points, each fully evaluated across the network. The spend
/// is zeroed afterwards: initialization does not draw down the budget.
NetworkHistory initial_design(const ProblemInstance& p, int count, std::uint64_t seed);

/// MAP-refit one GP per non-known node (known nodes get placeholder slots).
std::vector<NodeGP> fit_network(const ProblemInstance& p, const NetworkHistory& hist,
                                int restarts, std::uint64_t seed);

struct Recommendation {
    Vec x;
    double nu = 0.0;
    std::vector<Vec> inner_set;  // A, with x first
};

/// Multistart ascent of the estimated final-node posterior mean, then a sweep
/// of the inner set built around the maximizer (so nu is attained at x).
Recommendation recommend(const NetworkPosterior& post, const Mat& inner_samples,
                         const InnerSetConfig& icfg, const MultiStartConfig& mcfg);

/// Runs one algorithm on one problem until the budget gate stops it.
/// `init` shares an initial design across algorithms; nullptr draws a fresh
/// one from the config seed. Deterministic given (problem, algo, budget, cfg).
RunRecord run_bo(const ProblemInstance& p, Algo algo, double budget, const LoopConfig& cfg,
                 const NetworkHistory* init = nullptr);

}  // namespace fnbo
