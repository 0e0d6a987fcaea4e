#pragma once

#include "fnbo/acquisition.hpp"
#include "fnbo/optim.hpp"

namespace fnbo {

/// Multi-start ascent budget, scaled by the dimension being optimized.
struct MultiStartConfig {
    int raw_per_dim = 100;
    int starts_per_dim = 10;
    int ascent_iters = 60;
    std::uint64_t seed = 0;

    int raw_for(int dim) const { return std::max(raw_per_dim * std::max(dim, 1), 1); }
    int starts_for(int dim) const { return std::max(starts_per_dim * std::max(dim, 1), 1); }
};

struct InnerSetConfig {
    int n_thompson = 10;
    int n_local = 10;
    double local_radius = 0.1;  // times the largest box edge, max-norm ball
    int ts_raw = 64;
    int ts_starts = 2;
    int ts_ascent_iters = 30;
    std::uint64_t seed = 0;
};

/// Inner maximization set A: the current posterior-mean maximizer, a few
/// Thompson suggestions, and local perturbations of x_star (clipped).
std::vector<Vec> build_inner_set(const NetworkPosterior& post, const Vec& x_star,
                                 const InnerSetConfig& cfg);

struct NodeChoice {
    CandidateInput cand;
    double value = -1.0;    // -1 sentinel when no candidate exists yet
    bool feasible = false;
};

/// Best candidate for the evaluator's node: multistart ascent over the
/// controllable slice for every stored parent tuple (or over the joint
/// parent box for free-parent nodes).
NodeChoice maximize_node_acq(const PkgfnEvaluator& eval, const NetworkSpec& spec,
                             const NetworkHistory& hist, const MultiStartConfig& cfg);

struct Selection {
    bool stop = false;  // every node infeasible or unaffordable
    int node = -1;
    CandidateInput cand;
    double value = -1.0;
    std::vector<double> node_values;  // -1 for infeasible/unaffordable, NaN for known nodes
};

/// Argmax over nodes of the per-node maximized acquisition. Nodes whose best
/// candidate costs more than `remaining` are struck to the -1 sentinel; ties
/// break to the lowest node index.
Selection select_next(const NetworkPosterior& post, const BaseSampleSet& bs,
                      const NetworkHistory& hist, const std::vector<Vec>& inner_set,
                      double nu_star, const MultiStartConfig& cfg, double remaining);

struct OneShotResult {
    Vec z;       // full node input, parent tuple then controllable part
    Mat inner;   // I x d, one optimized fantasy point per outer sample
    double value = -1.0;
};

/// Joint ascent over (x_{I(k)}, x^(1..I)): each fantasy i gets its own inner
/// point instead of an inner maximization. Comparison harness only.
OneShotResult one_shot_maximize(const NetworkPosterior& post, const BaseSampleSet& bs, int node,
                                const Vec& tuple, double nu_star, double cost,
                                const MultiStartConfig& cfg);

}  // namespace fnbo
