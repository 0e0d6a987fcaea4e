#include "fnbo/gp.hpp"

#include <cmath>

#include "fnbo/optim.hpp"

namespace fnbo {

double GammaPrior::log_pdf(double x) const {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

namespace {

inline double m52(double r) {
    const double sr5 = 2.2360679774997896964 * r;
    return (1.0 + sr5 + sr5 * sr5 / 3.0) * std::exp(-sr5);
}

inline double scaled_dist(const KernelHyperparams& h, const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double d = (a[i] - b[i]) / h.lengthscales[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Mat gram(const KernelHyperparams& h, const Mat& A, const Mat& B) {
    Mat K(A.rows(), B.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < B.rows(); ++j)
            K(i, j) = h.outputscale * m52(scaled_dist(h, A.row(i), B.row(j)));
    return K;
}

}  // namespace

double kernel_eval(const KernelHyperparams& h, const Vec& a, const Vec& b) {
    require(a.size() == h.lengthscales.size() && b.size() == h.lengthscales.size(),
            "kernel_eval: dimension mismatch");
    return h.outputscale * m52(scaled_dist(h, a, b));
}

void NodeDataset::append(const Vec& z, double y) {
    if (count() == 0 && inputs.cols() == 0) inputs.resize(0, z.size());
    require(z.size() == inputs.cols(), "NodeDataset::append: dimension mismatch");
    inputs.conservativeResize(inputs.rows() + 1, Eigen::NoChange);
    inputs.row(inputs.rows() - 1) = z.transpose();
    outputs.conservativeResize(outputs.size() + 1);
    outputs[outputs.size() - 1] = y;
}

NodeGP::NodeGP(NodeDataset data, KernelHyperparams params, GpOptions opts)
    : params_(std::move(params)), data_(std::move(data)) {
    require(params_.lengthscales.size() > 0 && params_.lengthscales.minCoeff() > 0.0,
            "NodeGP: lengthscales must be positive");
    require(params_.outputscale > 0.0, "NodeGP: outputscale must be positive");
    require(params_.noise_variance >= 0.0, "NodeGP: noise must be non-negative");
    if (data_.count() > 0)
        require(data_.dim() == params_.lengthscales.size(), "NodeGP: data/lengthscale dim mismatch");
    if (opts.standardize && data_.count() >= 2) {
        out_mean_ = data_.outputs.mean();
        double ss = (data_.outputs.array() - out_mean_).matrix().squaredNorm();
        out_scale_ = std::sqrt(ss / (data_.count() - 1));
        if (!(out_scale_ > 1e-12)) { out_scale_ = 1.0; degenerate_ = true; }  // keep the center
    }
    factorize(opts.jitter);
}

void NodeGP::factorize(double jitter0) {
    const int n = data_.count();
    const double lam_std = params_.noise_variance / (out_scale_ * out_scale_);
    double j = jitter0;
    if (n == 0) { jitter_used_ = j; lambda_eff_ = lam_std + j; return; }
    Mat K = gram(params_, data_.inputs, data_.inputs);
    Vec ys = (data_.outputs.array() - out_mean_).matrix() / out_scale_;
    for (; j <= 1e-3; j *= 10.0) {
        Mat Kj = K + (lam_std + j) * Mat::Identity(n, n);
        Eigen::LLT<Mat> llt(Kj);
        if (llt.info() == Eigen::Success) {
            chol_ = llt.matrixL();
            alpha_ = llt.solve(ys);
            jitter_used_ = j;
            lambda_eff_ = lam_std + j;
            return;
        }
    }
    throw std::runtime_error("NodeGP: factorization failed even with jitter 1e-3");
}

void NodeGP::posterior(const Mat& points, Vec& mean, Vec& var) const {
    require(points.allFinite(), "posterior: non-finite query point");
    const int m = static_cast<int>(points.rows());
    mean.resize(m);
    var.resize(m);
    if (data_.count() == 0) {
        mean.setConstant(params_.mean_constant + out_mean_);
        var.setConstant(params_.outputscale * out_scale_ * out_scale_);
        return;
    }
    require(points.cols() == data_.dim(), "posterior: dimension mismatch");
    Mat kq = gram(params_, points, data_.inputs);           // m x n
    Mat v = chol_.triangularView<Eigen::Lower>().solve(kq.transpose());  // n x m
    const double s2 = out_scale_ * out_scale_;
    for (int i = 0; i < m; ++i) {
        mean[i] = out_mean_ + out_scale_ * (kq.row(i).dot(alpha_) + params_.mean_constant);
        double vv = params_.outputscale - v.col(i).squaredNorm();
        var[i] = s2 * std::max(vv, 0.0);
    }
}

std::pair<double, double> NodeGP::posterior_at(const Vec& z) const {
    Vec mean, var;
    posterior(z.transpose(), mean, var);
    return {mean[0], var[0]};
}

NodeGP::CrossStats NodeGP::posterior_with_cross(const Vec& z, const Mat& points) const {
    CrossStats cs;
    const int m = static_cast<int>(points.rows());
    const double s2 = out_scale_ * out_scale_;
    if (data_.count() == 0) {
        cs.mean = Vec::Constant(m, out_mean_);
        cs.var = Vec::Constant(m, params_.outputscale * s2);
        cs.cross.resize(m);
        for (int i = 0; i < m; ++i)
            cs.cross[i] = s2 * kernel_eval(params_, points.row(i), z);
        cs.mean_z = out_mean_;
        cs.var_z = params_.outputscale * s2;
        cs.pred_var = cs.var_z + params_.noise_variance + jitter_used_ * s2;
        return cs;
    }
    Mat kq = gram(params_, points, data_.inputs);  // m x n
    Mat kz = gram(params_, z.transpose(), data_.inputs);  // 1 x n
    Mat vq = chol_.triangularView<Eigen::Lower>().solve(kq.transpose());  // n x m
    Vec vz = chol_.triangularView<Eigen::Lower>().solve(kz.transpose());
    cs.mean.resize(m); cs.var.resize(m); cs.cross.resize(m);
    for (int i = 0; i < m; ++i) {
        cs.mean[i] = out_mean_ + out_scale_ * kq.row(i).dot(alpha_);
        cs.var[i] = s2 * std::max(params_.outputscale - vq.col(i).squaredNorm(), 0.0);
        double kxz = params_.outputscale * m52(scaled_dist(params_, points.row(i), z));
        cs.cross[i] = s2 * (kxz - vq.col(i).dot(vz));
    }
    cs.mean_z = out_mean_ + out_scale_ * kz.row(0).dot(alpha_);
    cs.var_z = s2 * std::max(params_.outputscale - vz.squaredNorm(), 0.0);
    cs.pred_var = cs.var_z + params_.noise_variance + jitter_used_ * s2;
    return cs;
}

NodeGP NodeGP::condition(const Vec& z, double y) const {
    require(std::isfinite(y), "condition: non-finite observation");
    NodeGP out = *this;
    const int n = data_.count();
    if (n > 0)
        require(z.size() == data_.dim(), "condition: dimension mismatch");
    out.data_.append(z, y);
    const double ys_new = (y - out_mean_) / out_scale_;
    if (n == 0) {
        out.factorize(jitter_used_ > 0 ? jitter_used_ : 1e-9);
        return out;
    }
    Mat kz = gram(params_, z.transpose(), data_.inputs);  // 1 x n
    Vec c = chol_.triangularView<Eigen::Lower>().solve(kz.transpose());
    double kzz = params_.outputscale + lambda_eff_;
    double d2 = kzz - c.squaredNorm();
    double floor = std::max(jitter_used_, 1e-12);
    double d = std::sqrt(std::max(d2, floor));
    out.chol_.resize(n + 1, n + 1);
    out.chol_.setZero();
    out.chol_.topLeftCorner(n, n) = chol_;
    out.chol_.block(n, 0, 1, n) = c.transpose();
    out.chol_(n, n) = d;
    Vec ys(n + 1);
    ys.head(n) = (data_.outputs.array() - out_mean_).matrix() / out_scale_;
    ys[n] = ys_new;
    Vec tmp = out.chol_.triangularView<Eigen::Lower>().solve(ys);
    out.alpha_ = out.chol_.transpose().triangularView<Eigen::Upper>().solve(tmp);
    return out;
}

double NodeGP::sample_at(const Vec& z, double w) const {
    require(std::isfinite(w), "sample_at: non-finite w");
    auto [mu, var] = posterior_at(z);
    return mu + std::sqrt(std::max(var, 0.0)) * w;
}

double NodeGP::predictive_var(const Vec& z) const {
    auto [mu, var] = posterior_at(z);
    (void)mu;
    return var + params_.noise_variance + jitter_used_ * out_scale_ * out_scale_;
}

bool NodeGP::zero_information(double pred_var) const {
    return pred_var <= 8.0 * std::max(jitter_used_, 1e-12) * out_scale_ * out_scale_;
}

NodeGP NodeGP::fit(const NodeDataset& data, const HyperPrior& prior, double noise_variance,
                   int restarts, std::uint64_t seed) {
    bool degen = false;
    KernelHyperparams p = map_fit(data, prior, noise_variance, restarts, seed, &degen);
    GpOptions opts;
    opts.standardize = true;
    NodeGP gp(data, std::move(p), opts);
    gp.degenerate_ = gp.degenerate_ || degen;
    return gp;
}

KernelHyperparams map_fit(const NodeDataset& data, const HyperPrior& prior, double noise_variance,
                          int restarts, std::uint64_t seed, bool* degenerate) {
    require(data.count() >= 1, "map_fit: empty dataset");
    const int d = data.dim();
    KernelHyperparams out;
    out.lengthscales = Vec::Constant(d, prior.lengthscale.mode());
    out.outputscale = prior.outputscale.mode();
    out.noise_variance = noise_variance;
    if (degenerate) *degenerate = false;

    const int n = data.count();
    double ymean = data.outputs.mean();
    double ss = (data.outputs.array() - ymean).matrix().squaredNorm();
    double yscale = n >= 2 ? std::sqrt(ss / (n - 1)) : 0.0;
    if (n < 2 || yscale <= 1e-12) {
        if (degenerate) *degenerate = true;
        return out;
    }
    Vec ys = (data.outputs.array() - ymean).matrix() / yscale;
    const double lam = noise_variance / (yscale * yscale) + 1e-9;

    // theta = (log lengthscales..., log outputscale)
    auto objective = [&](const Vec& theta) -> double {
        KernelHyperparams h;
        h.lengthscales = theta.head(d).array().exp();
        h.outputscale = std::exp(theta[d]);
        Mat K(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double kij = h.outputscale * m52(scaled_dist(h, data.inputs.row(i), data.inputs.row(j)));
                K(i, j) = kij;
                K(j, i) = kij;
            }
        K.diagonal().array() += lam;
        Eigen::LLT<Mat> llt(K);
        if (llt.info() != Eigen::Success) return -1e100;
        Vec a = llt.solve(ys);
        double logdet = 0.0;
        for (int i = 0; i < n; ++i) logdet += std::log(llt.matrixL()(i, i));
        double lml = -0.5 * ys.dot(a) - logdet - 0.5 * n * std::log(2.0 * M_PI);
        double lp = prior.outputscale.log_pdf(h.outputscale);
        for (int i = 0; i < d; ++i) lp += prior.lengthscale.log_pdf(h.lengthscales[i]);
        return lml + lp;
    };

    const Vec lo = Vec::Constant(d + 1, std::log(1e-3));
    const Vec hi = Vec::Constant(d + 1, std::log(1e3));
    AscentOptions aopts;
    aopts.max_iters = 80;
    aopts.fd_step_frac = 1e-5;

    Rng rng(derive_seed(seed, {0x6d6170u}));
    Vec best_theta;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(restarts, 1); ++r) {
        Vec theta(d + 1);
        if (r == 0) {
            for (int i = 0; i < d; ++i) theta[i] = std::log(prior.lengthscale.mode());
            theta[d] = std::log(prior.outputscale.mode());
        } else {
            for (int i = 0; i < d; ++i)
                theta[i] = std::log(std::max(prior.lengthscale.sample(rng), 1e-3));
            theta[d] = std::log(std::max(prior.outputscale.sample(rng), 1e-3));
        }
        AscentResult res = maximize_box(objective, theta, lo, hi, aopts);
        if (res.value > best_val) { best_val = res.value; best_theta = res.x; }
    }
    out.lengthscales = best_theta.head(d).array().exp();
    out.outputscale = std::exp(best_theta[d]);
    return out;
}

}  // namespace fnbo
