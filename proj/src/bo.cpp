#include "fnbo/bo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>

namespace fnbo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void append_num(std::string& s, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    s += buf;
}

// x of the row-th full-evaluation record, reassembled from the controllable
// slices stored at each node (rows are aligned across nodes for full evals)
Vec design_x_of_row(const NetworkSpec& spec, const NetworkHistory& hist, int row) {
    Vec x = Vec::Zero(spec.d);
    for (int k = 0; k < spec.K(); ++k) {
        const NodeSpec& n = spec.nodes[k];
        if (n.known) continue;
        const Eigen::Index np = static_cast<Eigen::Index>(n.parents.size());
        for (size_t j = 0; j < n.inputs.size(); ++j)
            x[n.inputs[j]] = hist.data[k].inputs(row, np + static_cast<Eigen::Index>(j));
    }
    return x;
}

double observed_node_of_row(const NetworkSpec& spec, const NetworkHistory& hist, int k, int row) {
    const NodeSpec& n = spec.nodes[k];
    if (!n.known) return hist.data[k].outputs[row];
    Vec pv(n.parents.size());
    for (size_t s = 0; s < n.parents.size(); ++s)
        pv[static_cast<Eigen::Index>(s)] = observed_node_of_row(spec, hist, n.parents[s], row);
    return n.known_fn(pv);
}

double observed_sink_of_row(const NetworkSpec& spec, const NetworkHistory& hist, int row) {
    return observed_node_of_row(spec, hist, spec.K() - 1, row);
}

double best_observed_sink(const NetworkSpec& spec, const NetworkHistory& hist) {
    const int sink = spec.K() - 1;
    if (!spec.nodes[sink].known) {
        require(hist.data[sink].count() > 0, "no final-node observations yet");
        return hist.data[sink].outputs.maxCoeff();
    }
    // known sink: rows are aligned full evaluations; fold the combiner
    const int rows = hist.data[spec.nodes[sink].parents[0]].count();
    require(rows > 0, "no final-node observations yet");
    double best = observed_sink_of_row(spec, hist, 0);
    for (int r = 1; r < rows; ++r) best = std::max(best, observed_sink_of_row(spec, hist, r));
    return best;
}

// plain-GP analogue of the inner set: mean maximizer, a few mean+w*sd
// maximizers, local perturbations
struct BlackboxRec {
    Vec x;
    double nu = 0.0;
    Mat inner;
};

BlackboxRec bb_recommend(const NodeGP& gp, const Vec& lo, const Vec& hi,
                         const InnerSetConfig& icfg, const MultiStartConfig& mcfg) {
    const int d = static_cast<int>(lo.size());
    AscentOptions opts;
    opts.max_iters = mcfg.ascent_iters;
    Objective mean = [&](const Vec& x) { return gp.posterior_at(x).first; };
    const AscentResult res = multistart_maximize(mean, lo, hi, mcfg.raw_for(d),
                                                 mcfg.starts_for(d), mcfg.seed, opts);
    std::vector<Vec> pts;
    pts.push_back(res.x);
    AscentOptions ts_opts;
    ts_opts.max_iters = icfg.ts_ascent_iters;
    Rng wr(derive_seed(icfg.seed, {1}));
    for (int t = 0; t < icfg.n_thompson; ++t) {
        const double w = wr.normal();
        Objective draw = [&](const Vec& x) {
            const auto [m, v] = gp.posterior_at(x);
            return m + w * std::sqrt(std::max(v, 0.0));
        };
        pts.push_back(multistart_maximize(draw, lo, hi, icfg.ts_raw, icfg.ts_starts,
                                          derive_seed(icfg.seed, {2, static_cast<std::uint64_t>(t)}),
                                          ts_opts)
                          .x);
    }
    if (icfg.n_local > 0) {
        double edge = 0.0;
        for (int i = 0; i < d; ++i) edge = std::max(edge, hi[i] - lo[i]);
        Rng rng(derive_seed(icfg.seed, {3}));
        for (int t = 0; t < icfg.n_local; ++t) {
            Vec x = res.x;
            for (int i = 0; i < d; ++i) {
                x[i] += icfg.local_radius * edge * (2.0 * rng.uniform() - 1.0);
                x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
            }
            pts.push_back(std::move(x));
        }
    }
    BlackboxRec out;
    out.inner = Mat(static_cast<Eigen::Index>(pts.size()), d);
    out.nu = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i) {
        out.inner.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
        const double m = gp.posterior_at(pts[i]).first;
        if (m > out.nu) {
            out.nu = m;
            out.x = pts[i];
        }
    }
    return out;
}

}  // namespace

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::pkgfn: return "pkgfn";
        case Algo::eifn: return "eifn";
        case Algo::kgfn: return "kgfn";
        case Algo::tsfn: return "tsfn";
        case Algo::ei: return "ei";
        case Algo::kg: return "kg";
        case Algo::random: return "random";
    }
    return "?";
}

Algo algo_from_name(const std::string& s) {
    for (Algo a : all_algos())
        if (algo_name(a) == s) return a;
    throw std::invalid_argument("unknown algorithm: " + s);
}

std::vector<Algo> all_algos() {
    return {Algo::pkgfn, Algo::eifn, Algo::kgfn, Algo::tsfn,
            Algo::ei,    Algo::kg,   Algo::random};
}

std::string RunRecord::to_csv() const {
    std::string s = "iter,node,cost,spent,metric,nu_star,wall_ms\n";
    for (const IterRow& r : rows) {
        s += std::to_string(r.iter);
        s += ',';
        s += std::to_string(r.node);
        s += ',';
        append_num(s, r.cost);
        s += ',';
        append_num(s, r.spent);
        s += ',';
        append_num(s, r.metric);
        s += ',';
        append_num(s, r.nu_star);
        s += ',';
        append_num(s, r.wall_ms);
        s += '\n';
    }
    return s;
}

NetworkHistory initial_design(const ProblemInstance& p, int count, std::uint64_t seed) {
    require(count >= 1, "initial_design: need at least one point");
    NetworkHistory hist(p.spec.K());
    Rng rng(derive_seed(seed, {0}));
    Rng noise(derive_seed(seed, {1}));
    for (int i = 0; i < count; ++i) {
        const Vec x = rng.uniform_vec(p.spec.lower, p.spec.upper);
        full_evaluate(p.spec, p.truth, x, &hist, &noise, p.noise_std);
    }
    hist.spent = 0.0;  // initialization does not draw down the budget
    return hist;
}

std::vector<NodeGP> fit_network(const ProblemInstance& p, const NetworkHistory& hist,
                                int restarts, std::uint64_t seed) {
    std::vector<NodeGP> gps(p.spec.K());
    for (int k = 0; k < p.spec.K(); ++k) {
        if (p.spec.nodes[k].known) continue;
        const double nv = p.noise_std[k] * p.noise_std[k];
        gps[k] = NodeGP::fit(hist.data[k], p.prior, nv, restarts,
                             derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    }
    return gps;
}

Recommendation recommend(const NetworkPosterior& post, const Mat& inner_samples,
                         const InnerSetConfig& icfg, const MultiStartConfig& mcfg) {
    const NetworkSpec& spec = post.spec();
    Objective nu = [&](const Vec& x) { return estimate_nu(post, x, inner_samples); };
    AscentOptions opts;
    opts.max_iters = mcfg.ascent_iters;
    const AscentResult res = multistart_maximize(nu, spec.lower, spec.upper, mcfg.raw_for(spec.d),
                                                 mcfg.starts_for(spec.d), mcfg.seed, opts);
    Recommendation rec;
    rec.inner_set = build_inner_set(post, res.x, icfg);
    rec.x = res.x;
    rec.nu = res.value;
    for (size_t i = 1; i < rec.inner_set.size(); ++i) {
        const double v = nu(rec.inner_set[i]);
        if (v > rec.nu) {
            rec.nu = v;
            rec.x = rec.inner_set[i];
        }
    }
    return rec;
}

RunRecord run_bo(const ProblemInstance& p, Algo algo, double budget, const LoopConfig& cfg,
                 const NetworkHistory* init) {
    require(budget > 0.0, "run_bo: budget must be positive");
    const NetworkSpec& spec = p.spec;
    const int K = spec.K(), d = spec.d;
    const int sink = K - 1;
    const double full_c = spec.full_cost();

    RunRecord rec;
    rec.algo = algo_name(algo);

    NetworkHistory hist =
        init != nullptr ? *init : initial_design(p, p.n_init, derive_seed(cfg.seed, {11}));
    const std::vector<int> counts0 = hist.counts;
    const int init_rows = hist.n_evals;
    if (cfg.charge_init) hist.spent += init_rows * full_c;

    Rng noise_rng(derive_seed(cfg.seed, {12}));

    const bool bb_metric = cfg.blackbox_metric &&
                           (algo == Algo::ei || algo == Algo::kg || algo == Algo::random);
    const bool wants_bb = algo == Algo::ei || algo == Algo::kg || bb_metric;
    const bool wants_net = !bb_metric;

    // black-box view of the full evaluations: (x, observed y_K)
    NodeDataset bb_data;
    if (wants_bb)
        for (int r = 0; r < init_rows; ++r)
            bb_data.append(design_x_of_row(spec, hist, r), observed_sink_of_row(spec, hist, r));
    const double bb_noise = p.noise_std[sink] * p.noise_std[sink];

    std::vector<NodeGP> gps;
    NodeGP bb_gp;
    Recommendation R;
    BlackboxRec bbR;

    // refit everything and refresh the recommendation; returns the sample set
    // the next selection shares with nu_star
    BaseSampleSet bs = make_base_samples(1, 1, K, 0);
    auto refresh = [&](int n) {
        const std::uint64_t tag = static_cast<std::uint64_t>(n);
        if (wants_net) gps = fit_network(p, hist, cfg.fit_restarts, derive_seed(cfg.seed, {13, tag}));
        if (wants_bb)
            bb_gp = NodeGP::fit(bb_data, p.prior, bb_noise, cfg.fit_restarts,
                                derive_seed(cfg.seed, {17, tag}));
        bs = make_base_samples(cfg.I, cfg.J, K, derive_seed(cfg.seed, {14, tag}), cfg.qmc,
                               cfg.antithetic);
        InnerSetConfig icfg = cfg.inner;
        icfg.seed = derive_seed(cfg.seed, {15, tag});
        MultiStartConfig rms = cfg.rec_ms;
        rms.seed = derive_seed(cfg.seed, {16, tag});
        if (wants_bb && (algo == Algo::kg || bb_metric))
            bbR = bb_recommend(bb_gp, spec.lower, spec.upper, icfg, rms);
        if (wants_net) {
            NetworkPosterior post(spec, gps);
            R = recommend(post, bs.inner, icfg, rms);
        } else {
            R.x = bbR.x;
            R.nu = bbR.nu;
            R.inner_set.clear();
        }
    };

    try {
        Clock::time_point t0 = Clock::now();
        refresh(0);
        {
            IterRow row;
            row.iter = 0;
            row.node = -1;
            row.cost = 0.0;
            row.spent = hist.spent;
            row.metric = p.metric(R.x);
            row.nu_star = R.nu;
            row.wall_ms = ms_since(t0);
            rec.rows.push_back(row);
        }

        for (int n = 1;; ++n) {
            t0 = Clock::now();
            int chosen = -1;
            double cost = full_c;
            const std::uint64_t tag = static_cast<std::uint64_t>(n);
            MultiStartConfig ams = cfg.acq_ms;
            ams.seed = derive_seed(cfg.seed, {20, tag});
            AscentOptions aopts;
            aopts.max_iters = ams.ascent_iters;
            if (algo == Algo::pkgfn) {
                NetworkPosterior post(spec, gps);
                const Selection sel = select_next(post, bs, hist, R.inner_set, R.nu, ams,
                                                  budget - hist.spent);
                if (sel.stop) break;
                chosen = sel.node;
                cost = spec.nodes[sel.node].cost;
                partial_evaluate(spec, p.truth, sel.cand, hist, &noise_rng,
                                 p.noise_std[sel.node]);
            } else {
                if (hist.spent + full_c > budget) break;
                Vec x_next;
                if (algo == Algo::random) {
                    Rng draw(derive_seed(cfg.seed, {21, tag}));
                    x_next = draw.uniform_vec(spec.lower, spec.upper);
                } else if (algo == Algo::tsfn) {
                    NetworkPosterior post(spec, gps);
                    x_next = tsfn_suggest(post, derive_seed(cfg.seed, {22, tag}), ams.raw_for(d),
                                          ams.starts_for(d), ams.ascent_iters);
                } else if (algo == Algo::eifn) {
                    NetworkPosterior post(spec, gps);
                    const double y_best = best_observed_sink(spec, hist);
                    Objective f = [&](const Vec& x) { return eifn_value(post, bs, x, y_best); };
                    x_next = multistart_maximize(f, spec.lower, spec.upper, ams.raw_for(d),
                                                 ams.starts_for(d), ams.seed, aopts)
                                 .x;
                } else if (algo == Algo::kgfn) {
                    NetworkPosterior post(spec, gps);
                    Objective f = [&](const Vec& x) {
                        return kgfn_full_value(post, bs, x, R.inner_set, R.nu);
                    };
                    x_next = multistart_maximize(f, spec.lower, spec.upper, ams.raw_for(d),
                                                 ams.starts_for(d), ams.seed, aopts)
                                 .x;
                } else if (algo == Algo::ei) {
                    const double y_best = bb_data.outputs.maxCoeff();
                    Objective f = [&](const Vec& x) {
                        const auto [m, v] = bb_gp.posterior_at(x);
                        return ei_value(m, std::sqrt(std::max(v, 0.0)), y_best);
                    };
                    x_next = multistart_maximize(f, spec.lower, spec.upper, ams.raw_for(d),
                                                 ams.starts_for(d), ams.seed, aopts)
                                 .x;
                } else {  // Algo::kg
                    Objective f = [&](const Vec& x) {
                        return kg_value(bb_gp, bs.outer.col(0), x, bbR.inner, bbR.nu);
                    };
                    x_next = multistart_maximize(f, spec.lower, spec.upper, ams.raw_for(d),
                                                 ams.starts_for(d), ams.seed, aopts)
                                 .x;
                }
                full_evaluate(spec, p.truth, x_next, &hist, &noise_rng, p.noise_std);
                if (wants_bb)
                    bb_data.append(x_next, observed_sink_of_row(spec, hist, bb_data.count()));
            }
            refresh(n);
            IterRow row;
            row.iter = n;
            row.node = chosen;
            row.cost = cost;
            row.spent = hist.spent;
            row.metric = p.metric(R.x);
            row.nu_star = R.nu;
            row.wall_ms = ms_since(t0);
            rec.rows.push_back(row);
        }
    } catch (const std::exception&) {
        rec.aborted = true;
    }

    rec.x_rec = R.x;
    rec.nu_rec = R.nu;
    try {
        rec.metric_rec = R.x.size() == d ? p.metric(R.x) : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception&) {
        rec.metric_rec = std::numeric_limits<double>::quiet_NaN();
        rec.aborted = true;
    }
    rec.node_counts.resize(K);
    for (int k = 0; k < K; ++k) rec.node_counts[k] = hist.counts[k] - counts0[k];
    return rec;
}

}  // namespace fnbo
