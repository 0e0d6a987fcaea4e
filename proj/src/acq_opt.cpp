#include "fnbo/acq_opt.hpp"

#include <cmath>
#include <limits>

namespace fnbo {

std::vector<Vec> build_inner_set(const NetworkPosterior& post, const Vec& x_star,
                                 const InnerSetConfig& cfg) {
    const NetworkSpec& spec = post.spec();
    require(x_star.size() == spec.d, "build_inner_set: x_star has wrong dimension");
    std::vector<Vec> out;
    out.push_back(x_star);
    for (int t = 0; t < cfg.n_thompson; ++t)
        out.push_back(tsfn_suggest(post, derive_seed(cfg.seed, {21, static_cast<std::uint64_t>(t)}),
                                   cfg.ts_raw, cfg.ts_starts, cfg.ts_ascent_iters));
    if (cfg.n_local > 0) {
        double edge = 0.0;
        for (int i = 0; i < spec.d; ++i) edge = std::max(edge, spec.upper[i] - spec.lower[i]);
        const double r = cfg.local_radius * edge;
        Rng rng(derive_seed(cfg.seed, {22}));
        for (int t = 0; t < cfg.n_local; ++t) {
            Vec x = x_star;
            for (int i = 0; i < spec.d; ++i) {
                x[i] += r * (2.0 * rng.uniform() - 1.0);
                x[i] = std::min(std::max(x[i], spec.lower[i]), spec.upper[i]);
            }
            out.push_back(std::move(x));
        }
    }
    return out;
}

NodeChoice maximize_node_acq(const PkgfnEvaluator& eval, const NetworkSpec& spec,
                             const NetworkHistory& hist, const MultiStartConfig& cfg) {
    const int k = eval.node();
    const NodeSpec& n = spec.nodes[k];
    const Vec clo = spec.controllable_lo(k), chi = spec.controllable_hi(k);
    const Eigen::Index np = static_cast<Eigen::Index>(n.parents.size());
    const Eigen::Index nc = clo.size();
    AscentOptions opts;
    opts.max_iters = cfg.ascent_iters;
    NodeChoice best;
    best.cand.node = k;
    if (n.free_parents) {
        Vec lo(np + nc), hi(np + nc);
        lo << n.parent_lo, clo;
        hi << n.parent_hi, chi;
        Objective f = [&](const Vec& z) { return eval.value(z); };
        const int dim = static_cast<int>(np + nc);
        const AscentResult res =
            multistart_maximize(f, lo, hi, cfg.raw_for(dim), cfg.starts_for(dim),
                                derive_seed(cfg.seed, {31, static_cast<std::uint64_t>(k)}), opts);
        best.cand.parent_outputs = res.x.head(np);
        best.cand.controllable = res.x.tail(nc);
        best.value = res.value;
        best.feasible = true;
        return best;
    }
    const std::vector<Vec> tuples = enumerate_candidates(spec, hist, k);
    for (size_t t = 0; t < tuples.size(); ++t) {
        const Vec& tup = tuples[t];
        if (nc == 0) {
            const double v = eval.value(tup);
            if (!best.feasible || v > best.value) {
                best.value = v;
                best.cand.parent_outputs = tup;
                best.cand.controllable = Vec(0);
            }
            best.feasible = true;
            continue;
        }
        Objective f = [&](const Vec& xc) {
            Vec z(np + nc);
            z << tup, xc;
            return eval.value(z);
        };
        const AscentResult res = multistart_maximize(
            f, clo, chi, cfg.raw_for(static_cast<int>(nc)), cfg.starts_for(static_cast<int>(nc)),
            derive_seed(cfg.seed, {31, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t)}),
            opts);
        if (!best.feasible || res.value > best.value) {
            best.value = res.value;
            best.cand.parent_outputs = tup;
            best.cand.controllable = res.x;
        }
        best.feasible = true;
    }
    if (!best.feasible) best.value = -1.0;
    return best;
}

Selection select_next(const NetworkPosterior& post, const BaseSampleSet& bs,
                      const NetworkHistory& hist, const std::vector<Vec>& inner_set,
                      double nu_star, const MultiStartConfig& cfg, double remaining) {
    const NetworkSpec& spec = post.spec();
    Selection sel;
    sel.node_values.assign(spec.K(), std::numeric_limits<double>::quiet_NaN());
    for (int k = 0; k < spec.K(); ++k) {
        if (spec.nodes[k].known) continue;
        PkgfnEvaluator eval(post, bs, k, inner_set, nu_star, spec.nodes[k].cost);
        const NodeChoice choice = maximize_node_acq(eval, spec, hist, cfg);
        if (!choice.feasible || spec.nodes[k].cost > remaining) {
            sel.node_values[k] = -1.0;  // infeasible or unaffordable
            continue;
        }
        sel.node_values[k] = choice.value;
        if (sel.node < 0 || choice.value > sel.value) {
            sel.value = choice.value;
            sel.node = k;
            sel.cand = choice.cand;
        }
    }
    sel.stop = sel.node < 0;
    return sel;
}

OneShotResult one_shot_maximize(const NetworkPosterior& post, const BaseSampleSet& bs, int node,
                                const Vec& tuple, double nu_star, double cost,
                                const MultiStartConfig& cfg) {
    const NetworkSpec& spec = post.spec();
    require(cost > 0.0, "one_shot_maximize: cost must be positive");
    const NodeSpec& n = spec.nodes[node];
    const Vec clo = spec.controllable_lo(node), chi = spec.controllable_hi(node);
    const Eigen::Index np = static_cast<Eigen::Index>(n.parents.size());
    const Eigen::Index nc = clo.size();
    const int I = bs.I();
    const int d = spec.d;
    // decision vector: [free parent values][controllable part][I inner points]
    const Eigen::Index nz = n.free_parents ? np + nc : nc;
    require(n.free_parents || tuple.size() == np, "one_shot_maximize: parent tuple size mismatch");
    Vec lo(nz + static_cast<Eigen::Index>(I) * d), hi(lo.size());
    if (n.free_parents) {
        lo.head(np) = n.parent_lo;
        hi.head(np) = n.parent_hi;
    }
    lo.segment(nz - nc, nc) = clo;
    hi.segment(nz - nc, nc) = chi;
    for (int i = 0; i < I; ++i) {
        lo.segment(nz + static_cast<Eigen::Index>(i) * d, d) = spec.lower;
        hi.segment(nz + static_cast<Eigen::Index>(i) * d, d) = spec.upper;
    }

    Objective f = [&](const Vec& v) {
        Vec z(np + nc);
        if (n.free_parents)
            z << v.head(np), v.segment(np, nc);
        else
            z << tuple, v.head(nc);
        double acc = 0.0;
        for (int i = 0; i < I; ++i) {
            const Vec xi = v.segment(nz + static_cast<Eigen::Index>(i) * d, d);
            const Mat s = post.fantasy_sink_samples(node, z, bs.outer.col(0).segment(i, 1), xi, bs.inner);
            acc += s.row(0).mean();
        }
        return (acc / I - nu_star) / cost;
    };

    AscentOptions opts;
    opts.max_iters = cfg.ascent_iters;
    const int dim = static_cast<int>(lo.size());
    const AscentResult res = multistart_maximize(f, lo, hi, cfg.raw_for(dim), cfg.starts_for(dim),
                                                 derive_seed(cfg.seed, {41, static_cast<std::uint64_t>(node)}),
                                                 opts);
    OneShotResult out;
    out.z = Vec(np + nc);
    if (n.free_parents)
        out.z << res.x.head(np), res.x.segment(np, nc);
    else
        out.z << tuple, res.x.head(nc);
    out.inner = Mat(I, d);
    for (int i = 0; i < I; ++i)
        out.inner.row(i) = res.x.segment(nz + static_cast<Eigen::Index>(i) * d, d).transpose();
    out.value = res.value;
    return out;
}

}  // namespace fnbo
