#pragma once

// Brute-force reference implementations used only by the acceptance tests.
// Everything here recomputes from public accessors with dense solves; none of
// the library's cached factorizations are reused.

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fnbo/gp.hpp"

namespace oracle {

using fnbo::KernelHyperparams;
using fnbo::Mat;
using fnbo::NodeGP;
using fnbo::Vec;

/// Gauss-Hermite rule for E[f(W)], W ~ N(0,1): Golub-Welsch on the
/// probabilists' three-term recurrence (Jacobi matrix offdiagonal sqrt(k)).
/// Weights sum to one.
inline void gauss_hermite(int n, Vec& nodes, Vec& weights) {
    Mat J = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        J(k, k - 1) = std::sqrt(static_cast<double>(k));
        J(k - 1, k) = J(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    nodes = es.eigenvalues();
    weights = es.eigenvectors().row(0).transpose().array().square();
}

template <typename F>
double gauss_hermite_expect(int n, F&& f) {
    Vec x, w;
    gauss_hermite(n, x, w);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w[i] * f(x[i]);
    return acc;
}

/// E[max_i (a_i + b_i U)], U ~ N(0,1): upper envelope of the lines, then the
/// Gaussian integral of each affine piece in closed form.
inline double expected_max_affine(std::vector<double> a, std::vector<double> b) {
    const size_t n = a.size();
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
        return b[i] != b[j] ? b[i] < b[j] : a[i] < a[j];
    });
    std::vector<double> as, bs, cut;  // kept lines and each one's left breakpoint
    for (size_t t = 0; t < n; ++t) {
        const double ai = a[idx[t]], bi = b[idx[t]];
        if (!bs.empty() && bi == bs.back()) {
            if (ai <= as.back()) continue;  // parallel and below
            as.pop_back();
            bs.pop_back();
            cut.pop_back();
        }
        for (;;) {
            if (as.empty()) {
                cut.push_back(-std::numeric_limits<double>::infinity());
                break;
            }
            // u where the new (steeper) line overtakes the current top
            const double c = (as.back() - ai) / (bi - bs.back());
            if (c <= cut.back()) {  // top never reaches the envelope
                as.pop_back();
                bs.pop_back();
                cut.pop_back();
                continue;
            }
            cut.push_back(c);
            break;
        }
        as.push_back(ai);
        bs.push_back(bi);
    }
    double acc = 0.0;
    for (size_t i = 0; i < as.size(); ++i) {
        const double lo = cut[i];
        const double hi = i + 1 < as.size() ? cut[i + 1] : std::numeric_limits<double>::infinity();
        const double Flo = std::isinf(lo) ? 0.0 : fnbo::norm_cdf(lo);
        const double Fhi = std::isinf(hi) ? 1.0 : fnbo::norm_cdf(hi);
        const double plo = std::isinf(lo) ? 0.0 : fnbo::norm_pdf(lo);
        const double phi = std::isinf(hi) ? 0.0 : fnbo::norm_pdf(hi);
        acc += as[i] * (Fhi - Flo) + bs[i] * (plo - phi);
    }
    return acc;
}

/// Dense-solve replica of the standardized-space GP regression model. The
/// hyperparameters, output standardization and jitter are read off the
/// library object; the linear algebra is rebuilt from scratch.
struct DenseGP {
    Mat X;
    Vec y;
    KernelHyperparams h;
    double out_mean = 0.0, out_scale = 1.0;
    double lam = 0.0;  // noise/scale^2 + jitter, standardized space

    static DenseGP from(const NodeGP& gp) {
        DenseGP d;
        d.X = gp.data().inputs;
        d.y = gp.data().outputs;
        d.h = gp.params();
        d.out_mean = gp.out_mean();
        d.out_scale = gp.out_scale();
        d.lam = d.h.noise_variance / (d.out_scale * d.out_scale) + gp.jitter_used();
        return d;
    }

    int n() const { return static_cast<int>(y.size()); }

    Mat gram(const Mat& a, const Mat& b) const {
        Mat out(a.rows(), b.rows());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < b.rows(); ++j)
                out(i, j) = fnbo::kernel_eval(h, a.row(i).transpose(), b.row(j).transpose());
        return out;
    }

    /// Posterior mean/variance in original units via a full LDLT solve.
    void posterior(const Mat& pts, Vec& mean, Vec& var) const {
        const int m = static_cast<int>(pts.rows());
        mean.resize(m);
        var.resize(m);
        const double s2 = out_scale * out_scale;
        if (n() == 0) {
            mean.setConstant(h.mean_constant + out_mean);
            var.setConstant(h.outputscale * s2);
            return;
        }
        Mat K = gram(X, X) + lam * Mat::Identity(n(), n());
        Eigen::LDLT<Mat> ldlt(K);
        Vec ys = (y.array() - out_mean).matrix() / out_scale;
        Vec alpha = ldlt.solve(ys);
        Mat kq = gram(pts, X);                // m x n
        Mat sol = ldlt.solve(kq.transpose()); // n x m
        for (int i = 0; i < m; ++i) {
            mean[i] = out_mean + out_scale * (kq.row(i).dot(alpha) + h.mean_constant);
            var[i] = s2 * std::max(h.outputscale - kq.row(i).dot(sol.col(i)), 0.0);
        }
    }

    double mean_at(const Vec& z) const {
        Vec m, v;
        posterior(z.transpose(), m, v);
        return m[0];
    }

    /// Posterior cross-covariance cov(f(a), f(z)) in original units.
    double cross(const Vec& a, const Vec& z) const {
        const double s2 = out_scale * out_scale;
        double kaz = fnbo::kernel_eval(h, a, z);
        if (n() == 0) return s2 * kaz;
        Mat K = gram(X, X) + lam * Mat::Identity(n(), n());
        Mat ka = gram(a.transpose(), X);
        Mat kz = gram(z.transpose(), X);
        Vec sol = Eigen::LDLT<Mat>(K).solve(kz.transpose().col(0));
        return s2 * (kaz - ka.row(0).dot(sol));
    }

    /// Same model with one more observation appended (the refit a rank-1
    /// conditioning step is supposed to match).
    DenseGP with(const Vec& z, double yv) const {
        DenseGP out = *this;
        out.X.conservativeResize(n() + 1, z.size());
        out.X.row(n()) = z.transpose();
        out.y.conservativeResize(n() + 1);
        out.y[n()] = yv;
        return out;
    }
};

}  // namespace oracle
