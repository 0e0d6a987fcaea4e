#pragma once

#include <optional>

#include "fnbo/common.hpp"

namespace fnbo {

struct GammaPrior {
    double shape = 2.0;
    double rate = 1.0;
    /// Mode of the density for shape >= 1, else the mean.
    double mode() const { return shape >= 1.0 ? (shape - 1.0) / rate : shape / rate; }
    double log_pdf(double x) const;
    double sample(Rng& rng) const { return rng.gamma(shape, rate); }
};

struct HyperPrior {
    GammaPrior lengthscale{3.0, 6.0};
    GammaPrior outputscale{2.0, 0.15};
};

struct KernelHyperparams {
    Vec lengthscales;            // per input dimension (ARD), > 0
    double outputscale = 1.0;    // kernel variance, > 0
    double noise_variance = 0.0; // observation noise (original output units)
    double mean_constant = 0.0;  // fixed 0 in all shipped problems
};

/// Matern 5/2 ARD kernel.
double kernel_eval(const KernelHyperparams& h, const Vec& a, const Vec& b);

struct NodeDataset {
    Mat inputs;   // n x d
    Vec outputs;  // n

    int count() const { return static_cast<int>(outputs.size()); }
    int dim() const { return static_cast<int>(inputs.cols()); }
    void append(const Vec& z, double y);
};

struct GpOptions {
    bool standardize = false;  // fit() turns this on; explicit construction is raw-space
    double jitter = 1e-9;      // added to the kernel diagonal (standardized space)
};

/// Exact GP regression for one network node. Immutable after construction;
/// condition() returns a new value.
class NodeGP {
public:
    NodeGP() = default;
    NodeGP(NodeDataset data, KernelHyperparams params, GpOptions opts = {});

    /// MAP fit with multi-start ascent in log-hyperparameter space. Noise is
    /// fixed, not fitted. Outputs standardized internally.
    static NodeGP fit(const NodeDataset& data, const HyperPrior& prior, double noise_variance,
                      int restarts, std::uint64_t seed);

    void posterior(const Mat& points, Vec& mean, Vec& var) const;
    std::pair<double, double> posterior_at(const Vec& z) const;

    /// Posterior means/variances at `points` plus posterior cross-covariance
    /// with a single site z, in one factorization pass. All in original units.
    struct CrossStats {
        Vec mean, var, cross;
        double mean_z = 0.0, var_z = 0.0, pred_var = 0.0;  // pred_var includes noise+jitter
    };
    CrossStats posterior_with_cross(const Vec& z, const Mat& points) const;

    /// Conditions on one extra (possibly hypothetical) observation; rank-1
    /// extension of the cached factorization, hyperparameters unchanged.
    NodeGP condition(const Vec& z, double y) const;

    /// mu(z) + sqrt(posterior variance) * w
    double sample_at(const Vec& z, double w) const;

    /// Posterior variance + noise + jitter floor, i.e. the variance of a new
    /// observation at z (original units).
    double predictive_var(const Vec& z) const;

    /// True when a hypothetical observation at this predictive variance
    /// carries no usable information (at the numerical noise floor).
    bool zero_information(double pred_var) const;

    const KernelHyperparams& params() const { return params_; }
    const NodeDataset& data() const { return data_; }
    int count() const { return data_.count(); }
    bool degenerate_fit() const { return degenerate_; }
    double out_mean() const { return out_mean_; }
    double out_scale() const { return out_scale_; }
    double jitter_used() const { return jitter_used_; }

private:
    void factorize(double jitter0);

    KernelHyperparams params_;
    NodeDataset data_;
    double out_mean_ = 0.0, out_scale_ = 1.0;  // output standardization
    double lambda_eff_ = 0.0;                  // (noise/scale^2 + jitter) in std space
    double jitter_used_ = 0.0;
    bool degenerate_ = false;
    Mat chol_;   // lower factor of K_std + lambda_eff I
    Vec alpha_;  // chol^-T chol^-1 y_std
};

/// MAP hyperparameters; noise fixed externally. Deterministic given seed.
KernelHyperparams map_fit(const NodeDataset& data, const HyperPrior& prior, double noise_variance,
                          int restarts, std::uint64_t seed, bool* degenerate = nullptr);

}  // namespace fnbo
