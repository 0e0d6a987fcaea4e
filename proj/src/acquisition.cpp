#include "fnbo/acquisition.hpp"

#include <cmath>
#include <limits>

#include "fnbo/optim.hpp"

namespace fnbo {

PkgfnEvaluator::PkgfnEvaluator(const NetworkPosterior& post, const BaseSampleSet& bs, int node,
                               std::vector<Vec> inner_set, double nu_star, double cost)
    : post_(&post),
      bs_(&bs),
      node_(node),
      inner_(std::move(inner_set)),
      nu_star_(nu_star),
      cost_(cost) {
    const NetworkSpec& spec = post.spec();
    const int K = spec.K();
    require(node >= 0 && node < K, "pkgfn: node out of range");
    require(!spec.nodes[node].known, "pkgfn: cannot evaluate a known node");
    require(cost > 0.0, "pkgfn: cost must be positive");
    require(!inner_.empty(), "pkgfn: inner set is empty");
    require(bs.K() == K, "pkgfn: base samples sized for a different network");
    dep_.assign(K, 0);
    dep_[node] = 1;
    for (int l = 0; l < K; ++l)
        if (spec.is_descendant(node, l)) dep_[l] = 1;

    const Mat& W = bs.inner;
    const int J = bs.J();
    cache_.resize(inner_.size());
    for (size_t a = 0; a < inner_.size(); ++a) {
        const Vec& x = inner_[a];
        require(x.size() == spec.d, "pkgfn: inner point has wrong dimension");
        XCache& xc = cache_[a];
        xc.shared.resize(K);
        for (int l = 0; l < K; ++l) {
            const NodeSpec& n = spec.nodes[l];
            const int din = spec.input_dim(l);
            if (dep_[l] && l != node) continue;  // recomputed for every z
            Mat pts(J, din);
            if (n.parents.empty()) {
                pts = spec.assemble(l, Vec(0), x).transpose().replicate(J, 1);
            } else {
                for (int j = 0; j < J; ++j) {
                    Vec pv(n.parents.size());
                    for (size_t s = 0; s < n.parents.size(); ++s)
                        pv[static_cast<Eigen::Index>(s)] = xc.shared[n.parents[s]](0, j);
                    pts.row(j) = spec.assemble(l, pv, x).transpose();
                }
            }
            if (l == node) {
                xc.node_pts = std::move(pts);
                continue;
            }
            xc.shared[l].resize(1, J);
            if (n.known) {
                for (int j = 0; j < J; ++j) xc.shared[l](0, j) = n.known_fn(pts.row(j).transpose());
            } else if (n.parents.empty()) {
                const auto [m, v] = post.gp(l).posterior_at(pts.row(0).transpose());
                const double s = std::sqrt(v);
                for (int j = 0; j < J; ++j) xc.shared[l](0, j) = m + s * W(j, l);
            } else {
                Vec m(J), v(J);
                post.gp(l).posterior(pts, m, v);
                for (int j = 0; j < J; ++j) xc.shared[l](0, j) = m[j] + std::sqrt(v[j]) * W(j, l);
            }
        }
    }
}

double PkgfnEvaluator::value(const Vec& z) const {
    const NetworkSpec& spec = post_->spec();
    const int K = spec.K();
    const int I = bs_->I();
    const int J = bs_->J();
    const Mat& W = bs_->inner;
    const NodeGP& g = post_->gp(node_);
    Vec best = Vec::Constant(I, -std::numeric_limits<double>::infinity());
    std::vector<Mat> vals(K);
    for (size_t a = 0; a < inner_.size(); ++a) {
        const XCache& xc = cache_[a];
        const Vec& x = inner_[a];
        const auto cs = g.posterior_with_cross(z, xc.node_pts);
        const bool zero = g.zero_information(cs.pred_var);
        const double sp = std::sqrt(cs.pred_var);
        for (int l = 0; l < K; ++l) {
            if (!dep_[l]) continue;
            const NodeSpec& n = spec.nodes[l];
            vals[l].resize(I, J);
            if (l == node_) {
                for (int j = 0; j < J; ++j) {
                    const double gain = zero ? 0.0 : cs.cross[j] / sp;
                    const double resid = std::sqrt(std::max(cs.var[j] - gain * gain, 0.0));
                    const double base = cs.mean[j] + resid * W(j, l);
                    for (int i = 0; i < I; ++i) vals[l](i, j) = base + gain * bs_->outer(i, 0);
                }
                continue;
            }
            const int din = spec.input_dim(l);
            Mat pts(static_cast<Eigen::Index>(I) * J, din);
            for (int i = 0; i < I; ++i)
                for (int j = 0; j < J; ++j) {
                    Vec pv(n.parents.size());
                    for (size_t s = 0; s < n.parents.size(); ++s) {
                        const int p = n.parents[s];
                        pv[static_cast<Eigen::Index>(s)] =
                            dep_[p] ? vals[p](i, j) : xc.shared[p](0, j);
                    }
                    pts.row(static_cast<Eigen::Index>(i) * J + j) =
                        spec.assemble(l, pv, x).transpose();
                }
            if (n.known) {
                for (int i = 0; i < I; ++i)
                    for (int j = 0; j < J; ++j)
                        vals[l](i, j) =
                            n.known_fn(pts.row(static_cast<Eigen::Index>(i) * J + j).transpose());
            } else {
                Vec m(static_cast<Eigen::Index>(I) * J), v(static_cast<Eigen::Index>(I) * J);
                post_->gp(l).posterior(pts, m, v);
                for (int i = 0; i < I; ++i)
                    for (int j = 0; j < J; ++j) {
                        const Eigen::Index r = static_cast<Eigen::Index>(i) * J + j;
                        vals[l](i, j) = m[r] + std::sqrt(v[r]) * W(j, l);
                    }
            }
        }
        const Mat& sink = vals[K - 1];
        for (int i = 0; i < I; ++i) best[i] = std::max(best[i], sink.row(i).mean());
    }
    return (best.mean() - nu_star_) / cost_;
}

double pkgfn_value(const NetworkPosterior& post, const BaseSampleSet& bs, int node, const Vec& z,
                   const std::vector<Vec>& inner_set, double nu_star, double cost) {
    return PkgfnEvaluator(post, bs, node, inner_set, nu_star, cost).value(z);
}

double eifn_value(const NetworkPosterior& post, const BaseSampleSet& bs, const Vec& x,
                  double y_best) {
    const Vec sink = post.path_sink_samples(x, bs.inner);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < sink.size(); ++j) acc += std::max(sink[j] - y_best, 0.0);
    return acc / static_cast<double>(sink.size());
}

double kgfn_full_value(const NetworkPosterior& post, const BaseSampleSet& bs, const Vec& x,
                       const std::vector<Vec>& inner_set, double nu_star) {
    const NetworkSpec& spec = post.spec();
    const int K = spec.K();
    const int I = bs.I();
    require(!inner_set.empty(), "kgfn_full: inner set is empty");
    require(bs.outer_path.cols() == K, "kgfn_full: base samples sized for a different network");
    double acc = 0.0;
    for (int i = 0; i < I; ++i) {
        std::vector<NodeGP> cond = post.gps();
        Vec y(K);
        for (int l = 0; l < K; ++l) {
            const NodeSpec& n = spec.nodes[l];
            Vec pv(n.parents.size());
            for (size_t s = 0; s < n.parents.size(); ++s)
                pv[static_cast<Eigen::Index>(s)] = y[n.parents[s]];
            const Vec z = spec.assemble(l, pv, x);
            if (n.known) {
                y[l] = n.known_fn(z);
                continue;
            }
            const auto [m, v] = cond[l].posterior_at(z);
            const double pv_z = cond[l].predictive_var(z);
            y[l] = m + std::sqrt(pv_z) * bs.outer_path(i, l);
            (void)v;
            if (!cond[l].zero_information(pv_z)) cond[l] = cond[l].condition(z, y[l]);
        }
        NetworkPosterior fant(spec, std::move(cond));
        double best = -std::numeric_limits<double>::infinity();
        for (const Vec& xa : inner_set) best = std::max(best, estimate_nu(fant, xa, bs.inner));
        acc += best;
    }
    return (acc / I - nu_star) / spec.full_cost();
}

Vec tsfn_suggest(const NetworkPosterior& post, std::uint64_t seed, int raw_samples, int starts,
                 int ascent_iters) {
    const NetworkSpec& spec = post.spec();
    Rng rng(derive_seed(seed, {11}));
    Mat w(1, spec.K());
    for (int k = 0; k < spec.K(); ++k) w(0, k) = rng.normal();
    Objective f = [&](const Vec& x) { return post.path_sink_samples(x, w)[0]; };
    AscentOptions opts;
    opts.max_iters = ascent_iters;
    return multistart_maximize(f, spec.lower, spec.upper, raw_samples, starts,
                               derive_seed(seed, {12}), opts)
        .x;
}

double ei_value(double mean, double sd, double best) {
    if (!(sd > 0.0)) return std::max(mean - best, 0.0);
    const double u = (mean - best) / sd;
    return sd * (u * norm_cdf(u) + norm_pdf(u));
}

double kg_value(const NodeGP& gp, const Vec& U, const Vec& z, const Mat& inner_pts,
                double nu_star) {
    require(inner_pts.rows() > 0, "kg: inner set is empty");
    const auto cs = gp.posterior_with_cross(z, inner_pts);
    const bool zero = gp.zero_information(cs.pred_var);
    const double sp = std::sqrt(cs.pred_var);
    const int I = static_cast<int>(U.size());
    const int M = static_cast<int>(inner_pts.rows());
    double acc = 0.0;
    for (int i = 0; i < I; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (int m = 0; m < M; ++m) {
            const double gain = zero ? 0.0 : cs.cross[m] / sp;
            best = std::max(best, cs.mean[m] + gain * U[i]);
        }
        acc += best;
    }
    return acc / I - nu_star;
}

}  // namespace fnbo
