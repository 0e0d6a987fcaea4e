#include "fnbo/sampler.hpp"

#include <cmath>

namespace fnbo {

namespace {

Mat normal_block(int rows, int cols, std::uint64_t seed, bool qmc) {
    Mat out(rows, cols);
    if (qmc) {
        Sobol seq(cols, seed, /*scramble=*/true);
        for (int r = 0; r < rows; ++r) {
            const Vec u = seq.next();
            for (int c = 0; c < cols; ++c) out(r, c) = norm_ppf(u[c]);
        }
    } else {
        Rng rng(seed);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) out(r, c) = rng.normal();
    }
    return out;
}

}  // namespace

BaseSampleSet make_base_samples(int I, int J, int K, std::uint64_t seed, bool qmc,
                                bool antithetic) {
    require(I >= 1 && J >= 1 && K >= 1, "make_base_samples: sizes must be positive");
    require(K <= 32, "make_base_samples: at most 32 nodes supported");
    BaseSampleSet bs;
    bs.seed = seed;
    bs.outer = normal_block(I, 1, derive_seed(seed, {1}), qmc);
    bs.outer_path = normal_block(I, K, derive_seed(seed, {2}), qmc);
    if (antithetic) {
        require(J % 2 == 0, "make_base_samples: antithetic needs even J");
        const Mat half = normal_block(J / 2, K, derive_seed(seed, {3}), qmc);
        bs.inner.resize(J, K);
        bs.inner.topRows(J / 2) = half;
        bs.inner.bottomRows(J / 2) = -half;
    } else {
        bs.inner = normal_block(J, K, derive_seed(seed, {3}), qmc);
    }
    return bs;
}

NetworkPosterior::NetworkPosterior(const NetworkSpec& spec, std::vector<NodeGP> gps)
    : spec_(&spec), gps_(std::move(gps)) {
    require(static_cast<int>(gps_.size()) == spec.K(),
            "NetworkPosterior: one model per node required");
}

Mat NetworkPosterior::path_node_samples(const Vec& x, const Mat& W) const {
    const int K = spec_->K();
    const int J = static_cast<int>(W.rows());
    require(W.cols() == K, "path samples: W needs one column per node");
    require(x.size() == spec_->d, "path samples: x has wrong dimension");
    Mat vals(J, K);
    for (int l = 0; l < K; ++l) {
        const NodeSpec& n = spec_->nodes[l];
        const int din = spec_->input_dim(l);
        if (n.parents.empty()) {
            const Vec z = spec_->assemble(l, Vec(0), x);
            const auto [m, v] = gps_[l].posterior_at(z);
            const double s = std::sqrt(v);
            for (int j = 0; j < J; ++j) vals(j, l) = m + s * W(j, l);
            continue;
        }
        Mat pts(J, din);
        for (int j = 0; j < J; ++j) {
            Vec pv(n.parents.size());
            for (size_t s = 0; s < n.parents.size(); ++s)
                pv[static_cast<Eigen::Index>(s)] = vals(j, n.parents[s]);
            pts.row(j) = spec_->assemble(l, pv, x).transpose();
        }
        if (n.known) {
            for (int j = 0; j < J; ++j) vals(j, l) = n.known_fn(pts.row(j).transpose());
            continue;
        }
        Vec m(J), v(J);
        gps_[l].posterior(pts, m, v);
        for (int j = 0; j < J; ++j) vals(j, l) = m[j] + std::sqrt(v[j]) * W(j, l);
    }
    return vals;
}

Vec NetworkPosterior::path_sink_samples(const Vec& x, const Mat& W) const {
    return path_node_samples(x, W).col(spec_->K() - 1);
}

Mat NetworkPosterior::fantasy_sink_samples(int node, const Vec& z, const Vec& U, const Vec& x,
                                           const Mat& W) const {
    const int K = spec_->K();
    const int I = static_cast<int>(U.size());
    const int J = static_cast<int>(W.rows());
    require(node >= 0 && node < K, "fantasy samples: node out of range");
    require(!spec_->nodes[node].known, "fantasy samples: cannot fantasize a known node");
    require(W.cols() == K, "fantasy samples: W needs one column per node");

    const double pred_var = gps_[node].predictive_var(z);
    if (gps_[node].zero_information(pred_var)) {
        const Vec sink = path_sink_samples(x, W);
        return sink.transpose().replicate(I, 1);
    }

    std::vector<char> dep(K, 0);
    dep[node] = 1;
    for (int l = 0; l < K; ++l)
        if (spec_->is_descendant(node, l)) dep[l] = 1;

    std::vector<Mat> vals(K);  // rows: 1 if shared across fantasies, else I
    for (int l = 0; l < K; ++l) {
        const NodeSpec& n = spec_->nodes[l];
        const int din = spec_->input_dim(l);
        const int R = dep[l] ? I : 1;
        vals[l].resize(R, J);
        if (!dep[l]) {
            if (n.parents.empty()) {
                const Vec zl = spec_->assemble(l, Vec(0), x);
                const auto [m, v] = gps_[l].posterior_at(zl);
                const double s = std::sqrt(v);
                for (int j = 0; j < J; ++j) vals[l](0, j) = m + s * W(j, l);
            } else {
                Mat pts(J, din);
                for (int j = 0; j < J; ++j) {
                    Vec pv(n.parents.size());
                    for (size_t s = 0; s < n.parents.size(); ++s)
                        pv[static_cast<Eigen::Index>(s)] = vals[n.parents[s]](0, j);
                    pts.row(j) = spec_->assemble(l, pv, x).transpose();
                }
                if (n.known) {
                    for (int j = 0; j < J; ++j) vals[l](0, j) = n.known_fn(pts.row(j).transpose());
                } else {
                    Vec m(J), v(J);
                    gps_[l].posterior(pts, m, v);
                    for (int j = 0; j < J; ++j) vals[l](0, j) = m[j] + std::sqrt(v[j]) * W(j, l);
                }
            }
            continue;
        }
        if (l == node) {
            // parents of the fantasized node are never its descendants, so
            // their samples are shared: J distinct inputs, updated in closed
            // form against the single fantasy point z.
            Mat pts(J, din);
            for (int j = 0; j < J; ++j) {
                Vec pv(n.parents.size());
                for (size_t s = 0; s < n.parents.size(); ++s)
                    pv[static_cast<Eigen::Index>(s)] = vals[n.parents[s]](0, j);
                pts.row(j) = spec_->assemble(l, pv, x).transpose();
            }
            const auto cs = gps_[l].posterior_with_cross(z, pts);
            const double sp = std::sqrt(cs.pred_var);
            for (int j = 0; j < J; ++j) {
                const double gain = cs.cross[j] / sp;
                const double resid = std::sqrt(std::max(cs.var[j] - gain * gain, 0.0));
                const double base = cs.mean[j] + resid * W(j, l);
                for (int i = 0; i < I; ++i) vals[l](i, j) = base + gain * U[i];
            }
            continue;
        }
        // descendant of the fantasized node: one input per (fantasy, draw)
        Mat pts(static_cast<Eigen::Index>(I) * J, din);
        for (int i = 0; i < I; ++i)
            for (int j = 0; j < J; ++j) {
                Vec pv(n.parents.size());
                for (size_t s = 0; s < n.parents.size(); ++s) {
                    const Mat& pm = vals[n.parents[s]];
                    pv[static_cast<Eigen::Index>(s)] = pm(pm.rows() == 1 ? 0 : i, j);
                }
                pts.row(static_cast<Eigen::Index>(i) * J + j) = spec_->assemble(l, pv, x).transpose();
            }
        if (n.known) {
            for (int i = 0; i < I; ++i)
                for (int j = 0; j < J; ++j)
                    vals[l](i, j) = n.known_fn(pts.row(static_cast<Eigen::Index>(i) * J + j).transpose());
        } else {
            Vec m(static_cast<Eigen::Index>(I) * J), v(static_cast<Eigen::Index>(I) * J);
            gps_[l].posterior(pts, m, v);
            for (int i = 0; i < I; ++i)
                for (int j = 0; j < J; ++j) {
                    const Eigen::Index r = static_cast<Eigen::Index>(i) * J + j;
                    vals[l](i, j) = m[r] + std::sqrt(v[r]) * W(j, l);
                }
        }
    }
    const Mat& sink = vals[K - 1];
    if (sink.rows() == 1) return sink.replicate(I, 1);
    return sink;
}

double estimate_nu(const NetworkPosterior& post, const Vec& x, const Mat& W) {
    return post.path_sink_samples(x, W).mean();
}

}  // namespace fnbo
