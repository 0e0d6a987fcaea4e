#pragma once

#include "fnbo/sampler.hpp"

namespace fnbo {

/// Cost-aware partial-evaluation lookahead for one node, shared base samples.
///
///   value(z) = [ (1/I) sum_i max_{x in A} (1/J) sum_j yK_ij(x; z) - nu_star ] / cost
///
/// where fantasy i conditions the node on mu(z) + sqrt(pred_var(z)) * U_i.
/// Per-x quantities that do not depend on z (upstream node samples, the
/// node's own input points) are cached at construction, so repeated value()
/// calls inside an optimizer only pay for the fantasized node and its
/// descendants.
class PkgfnEvaluator {
  public:
    PkgfnEvaluator(const NetworkPosterior& post, const BaseSampleSet& bs, int node,
                   std::vector<Vec> inner_set, double nu_star, double cost);

    double value(const Vec& z) const;
    int node() const { return node_; }

  private:
    struct XCache {
        std::vector<Mat> shared;  // per node: 1 x J samples (empty when fantasy-dependent)
        Mat node_pts;             // J x input_dim(node): inputs of the fantasized node
    };

    const NetworkPosterior* post_;
    const BaseSampleSet* bs_;
    int node_;
    std::vector<Vec> inner_;
    double nu_star_, cost_;
    std::vector<char> dep_;
    std::vector<XCache> cache_;
};

/// One-call form of the above.
double pkgfn_value(const NetworkPosterior& post, const BaseSampleSet& bs, int node, const Vec& z,
                   const std::vector<Vec>& inner_set, double nu_star, double cost);

/// Expected improvement of the network output at x over the best observed
/// final value, Monte Carlo over the inner draws.
double eifn_value(const NetworkPosterior& post, const BaseSampleSet& bs, const Vec& x,
                  double y_best);

/// Full-evaluation knowledge gradient: fantasizes every node along the path
/// through x (outer_path draws), conditions all node models, measures the
/// gain in max_{x' in A} nu_hat, and divides by the full evaluation cost.
double kgfn_full_value(const NetworkPosterior& post, const BaseSampleSet& bs, const Vec& x,
                       const std::vector<Vec>& inner_set, double nu_star);

/// Thompson-sampling suggestion: maximizes one fixed-draw network path
/// realization over the design box.
Vec tsfn_suggest(const NetworkPosterior& post, std::uint64_t seed, int raw_samples, int starts,
                 int ascent_iters = 40);

/// Classic closed-form expected improvement.
double ei_value(double mean, double sd, double best);

/// Discrete knowledge gradient for a single model: fantasizes gp at z with
/// draws U and measures the mean gain of max over inner_pts (rows).
double kg_value(const NodeGP& gp, const Vec& U, const Vec& z, const Mat& inner_pts,
                double nu_star);

}  // namespace fnbo
