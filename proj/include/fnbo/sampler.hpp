#pragma once

#include <cstdint>
#include <vector>

#include "fnbo/network.hpp"

namespace fnbo {

/// Frozen standard-normal base samples shared across all candidate evaluations
/// of one acquisition round (sample-average approximation).
struct BaseSampleSet {
    Mat outer;       // I x 1: fantasy draws for single-node lookahead
    Mat outer_path;  // I x K: per-node fantasy draws for full-evaluation lookahead
    Mat inner;       // J x K: per-node draws for posterior path sampling
    std::uint64_t seed = 0;

    int I() const { return static_cast<int>(outer.rows()); }
    int J() const { return static_cast<int>(inner.rows()); }
    int K() const { return static_cast<int>(inner.cols()); }
};

/// qmc: inverse-CDF of a digitally shifted Sobol sequence (per block);
/// antithetic mirrors the second half of the inner block (J must be even).
BaseSampleSet make_base_samples(int I, int J, int K, std::uint64_t seed, bool qmc = true,
                                bool antithetic = false);

/// Joint posterior over network outputs implied by the per-node GPs.
/// Sampling walks the DAG, feeding each node the sampled parent outputs:
///   y_l = mu_l(z_l) + sigma_l(z_l) * w_l   (latent posterior std).
class NetworkPosterior {
  public:
    NetworkPosterior(const NetworkSpec& spec, std::vector<NodeGP> gps);

    const NetworkSpec& spec() const { return *spec_; }
    const NodeGP& gp(int k) const { return gps_[k]; }
    const std::vector<NodeGP>& gps() const { return gps_; }

    /// J x K node samples at x; row j uses draw row W.row(j).
    Mat path_node_samples(const Vec& x, const Mat& W) const;
    /// Sink column of the above (size J).
    Vec path_sink_samples(const Vec& x, const Mat& W) const;

    /// Sink samples with node `node` fantasy-conditioned at z on
    /// y_hat_i = mu(z) + sqrt(pred_var(z)) * U[i]. Closed-form update, no
    /// refactorization; returns I x J (row i = fantasy i). Nodes that are not
    /// descendants of `node` share their samples across fantasies. When z
    /// carries no information (pred_var at noise floor) the fantasies
    /// collapse onto the unconditioned path.
    Mat fantasy_sink_samples(int node, const Vec& z, const Vec& U, const Vec& x,
                             const Mat& W) const;

  private:
    const NetworkSpec* spec_;
    std::vector<NodeGP> gps_;
};

/// nu_hat(x): posterior-mean network value estimated by averaging sink path
/// samples over the inner draws.
double estimate_nu(const NetworkPosterior& post, const Vec& x, const Mat& W);

}  // namespace fnbo
