#include "fnbo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace fnbo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot write " + path);
    out << content;
}

ProblemInstance build_problem(const ExperimentConfig& cfg) {
    ProblemInstance p;
    try {
        p = make_problem(cfg.problem, derive_seed(cfg.seed, {99}));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("config key 'problem': unknown problem '" + cfg.problem + "'");
    }
    if (!cfg.costs.empty()) {
        if (static_cast<int>(cfg.costs.size()) != p.spec.K())
            throw std::invalid_argument("config key 'costs': expected " +
                                        std::to_string(p.spec.K()) + " entries");
        for (int k = 0; k < p.spec.K(); ++k) {
            const bool known = p.spec.nodes[k].known;
            if (known && cfg.costs[k] != 0.0)
                throw std::invalid_argument("config key 'costs': node " + std::to_string(k) +
                                            " is a known combiner and must cost 0");
            if (!known && cfg.costs[k] <= 0.0)
                throw std::invalid_argument("config key 'costs': node " + std::to_string(k) +
                                            " needs a positive cost");
            p.spec.nodes[k].cost = cfg.costs[k];
        }
        p.spec.validate();
    }
    if (cfg.noise >= 0.0) p = with_noise(std::move(p), cfg.noise);
    return p;
}

// last observation carried forward onto the grid (first row carried backward)
void locf_row(const std::vector<IterRow>& rows, const Vec& grid, Eigen::Ref<Vec> out) {
    int idx = -1;
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
        while (idx + 1 < static_cast<int>(rows.size()) && rows[idx + 1].spent <= grid[g]) ++idx;
        out[g] = rows[std::max(idx, 0)].metric;
    }
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_toml(const TomlTable& t) {
    static const std::set<std::string> known = {
        "problem",      "algorithms",  "budget",       "replications", "seed",
        "costs",        "noise",       "I",            "J",            "n_thompson",
        "n_local",      "local_radius", "model_mode",  "out_dir",      "raw_per_dim",
        "starts_per_dim", "ascent_iters", "fit_restarts", "qmc",       "antithetic",
        "charge_init",  "threads",     "score_I",      "score_J",      "compare_snapshots",
        "compare_I",    "compare_A"};
    for (const std::string& k : t.keys())
        if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");

    ExperimentConfig c;
    c.problem = t.get_string("problem", c.problem);
    if (t.has("algorithms")) c.algorithms = t.get_strings("algorithms");
    c.budget = t.get_double("budget", c.budget);
    c.replications = t.get_int("replications", c.replications);
    const double seed = t.get_double("seed", 0.0);
    if (seed < 0.0) throw std::invalid_argument("config key 'seed' must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    c.costs = t.get_doubles("costs");
    c.noise = t.get_double("noise", c.noise);
    c.I = t.get_int("I", c.I);
    c.J = t.get_int("J", c.J);
    c.n_thompson = t.get_int("n_thompson", c.n_thompson);
    c.n_local = t.get_int("n_local", c.n_local);
    c.local_radius = t.get_double("local_radius", c.local_radius);
    c.model_mode = t.get_string("model_mode", c.model_mode);
    c.out_dir = t.get_string("out_dir", c.out_dir);
    c.raw_per_dim = t.get_int("raw_per_dim", c.raw_per_dim);
    c.starts_per_dim = t.get_int("starts_per_dim", c.starts_per_dim);
    c.ascent_iters = t.get_int("ascent_iters", c.ascent_iters);
    c.fit_restarts = t.get_int("fit_restarts", c.fit_restarts);
    c.qmc = t.get_bool("qmc", c.qmc);
    c.antithetic = t.get_bool("antithetic", c.antithetic);
    c.charge_init = t.get_bool("charge_init", c.charge_init);
    c.threads = t.get_int("threads", c.threads);
    c.score_I = t.get_int("score_I", c.score_I);
    c.score_J = t.get_int("score_J", c.score_J);
    auto int_list = [&](const char* key, std::vector<int>& dst) {
        if (!t.has(key)) return;
        dst.clear();
        for (double v : t.get_doubles(key)) {
            if (static_cast<double>(static_cast<int>(v)) != v)
                throw std::invalid_argument(std::string("config key '") + key +
                                            "' must hold integers");
            dst.push_back(static_cast<int>(v));
        }
    };
    int_list("compare_snapshots", c.compare_snapshots);
    int_list("compare_I", c.compare_I);
    int_list("compare_A", c.compare_A);
    c.validate();
    return c;
}

std::string ExperimentConfig::to_toml() const {
    TomlTable t;
    t.set("problem", TomlValue::of(problem));
    t.set("algorithms", TomlValue::of(algorithms));
    t.set("budget", TomlValue::of(budget));
    t.set("replications", TomlValue::of(static_cast<double>(replications)));
    t.set("seed", TomlValue::of(static_cast<double>(seed)));
    if (!costs.empty()) t.set("costs", TomlValue::of(costs));
    if (noise >= 0.0) t.set("noise", TomlValue::of(noise));
    t.set("I", TomlValue::of(static_cast<double>(I)));
    t.set("J", TomlValue::of(static_cast<double>(J)));
    t.set("n_thompson", TomlValue::of(static_cast<double>(n_thompson)));
    t.set("n_local", TomlValue::of(static_cast<double>(n_local)));
    t.set("local_radius", TomlValue::of(local_radius));
    t.set("model_mode", TomlValue::of(model_mode));
    t.set("out_dir", TomlValue::of(out_dir));
    t.set("raw_per_dim", TomlValue::of(static_cast<double>(raw_per_dim)));
    t.set("starts_per_dim", TomlValue::of(static_cast<double>(starts_per_dim)));
    t.set("ascent_iters", TomlValue::of(static_cast<double>(ascent_iters)));
    t.set("fit_restarts", TomlValue::of(static_cast<double>(fit_restarts)));
    t.set("qmc", TomlValue::of(qmc));
    t.set("antithetic", TomlValue::of(antithetic));
    t.set("charge_init", TomlValue::of(charge_init));
    t.set("threads", TomlValue::of(static_cast<double>(threads)));
    t.set("score_I", TomlValue::of(static_cast<double>(score_I)));
    t.set("score_J", TomlValue::of(static_cast<double>(score_J)));
    auto as_doubles = [](const std::vector<int>& v) {
        return std::vector<double>(v.begin(), v.end());
    };
    t.set("compare_snapshots", TomlValue::of(as_doubles(compare_snapshots)));
    t.set("compare_I", TomlValue::of(as_doubles(compare_I)));
    t.set("compare_A", TomlValue::of(as_doubles(compare_A)));
    return t.dump();
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument("config key '" + key + "': " + why);
    };
    if (replications < 1) bad("replications", "must be >= 1");
    if (algorithms.empty()) bad("algorithms", "must list at least one algorithm");
    for (const std::string& a : algorithms) {
        try {
            algo_from_name(a);
        } catch (const std::invalid_argument&) {
            bad("algorithms", "unknown algorithm '" + a + "'");
        }
    }
    for (double c : costs)
        if (c < 0.0) bad("costs", "entries must be non-negative");
    if (I < 1) bad("I", "must be >= 1");
    if (J < 1) bad("J", "must be >= 1");
    if (n_thompson < 0) bad("n_thompson", "must be >= 0");
    if (n_local < 0) bad("n_local", "must be >= 0");
    if (local_radius <= 0.0) bad("local_radius", "must be positive");
    if (model_mode != "networked" && model_mode != "blackbox")
        bad("model_mode", "must be 'networked' or 'blackbox'");
    if (raw_per_dim < 1) bad("raw_per_dim", "must be >= 1");
    if (starts_per_dim < 1) bad("starts_per_dim", "must be >= 1");
    if (ascent_iters < 1) bad("ascent_iters", "must be >= 1");
    if (fit_restarts < 1) bad("fit_restarts", "must be >= 1");
    if (threads < 1) bad("threads", "must be >= 1");
    if (score_I < 1) bad("score_I", "must be >= 1");
    if (score_J < 1) bad("score_J", "must be >= 1");
    if (compare_snapshots.empty()) bad("compare_snapshots", "must list at least one size");
    for (int s : compare_snapshots)
        if (s < 1) bad("compare_snapshots", "sizes must be >= 1");
    if (compare_I.empty()) bad("compare_I", "must list at least one fantasy count");
    for (int i : compare_I)
        if (i < 1) bad("compare_I", "counts must be >= 1");
    if (compare_A.empty()) bad("compare_A", "must list at least one inner-set size");
    for (int a : compare_A)
        if (a < 3 || a % 2 == 0) bad("compare_A", "sizes must be odd and >= 3");
}

LoopConfig ExperimentConfig::loop_config(std::uint64_t run_seed) const {
    LoopConfig lc;
    lc.I = I;
    lc.J = J;
    lc.qmc = qmc;
    lc.antithetic = antithetic;
    lc.inner.n_thompson = n_thompson;
    lc.inner.n_local = n_local;
    lc.inner.local_radius = local_radius;
    lc.acq_ms.raw_per_dim = raw_per_dim;
    lc.acq_ms.starts_per_dim = starts_per_dim;
    lc.acq_ms.ascent_iters = ascent_iters;
    lc.rec_ms = lc.acq_ms;
    lc.fit_restarts = fit_restarts;
    lc.charge_init = charge_init;
    lc.blackbox_metric = model_mode == "blackbox";
    lc.seed = run_seed;
    return lc;
}

std::string AggregateReport::aggregate_csv() const {
    std::string s = "algo,spent,mean_metric,se_metric\n";
    for (const AlgoCurve& c : curves)
        for (Eigen::Index g = 0; g < grid.size(); ++g) {
            s += c.algo;
            s += ',';
            s += fmt_g17(grid[g]);
            s += ',';
            s += fmt_g17(c.mean[g]);
            s += ',';
            s += fmt_g17(c.se[g]);
            s += '\n';
        }
    return s;
}

std::string AggregateReport::node_counts_csv() const {
    std::string s = "algo,node,mean_count\n";
    for (const AlgoCurve& c : curves)
        for (Eigen::Index k = 0; k < c.node_means.size(); ++k) {
            s += c.algo;
            s += ',';
            s += std::to_string(k);
            s += ',';
            s += fmt_g17(c.node_means[k]);
            s += '\n';
        }
    return s;
}

std::string AggregateReport::timings_csv() const {
    std::string s = "algo,mean_run_ms,mean_iter_ms\n";
    for (const AlgoCurve& c : curves) {
        s += c.algo;
        s += ',';
        s += fmt_g17(c.mean_run_ms);
        s += ',';
        s += fmt_g17(c.mean_iter_ms);
        s += '\n';
    }
    return s;
}

std::string AggregateReport::curves_svg() const {
    const double W = 720, H = 480, L = 70, Rm = 20, T = 20, Bm = 50;
    double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
    for (const AlgoCurve& c : curves)
        for (Eigen::Index g = 0; g < grid.size(); ++g) {
            ylo = std::min(ylo, c.mean[g] - 2.0 * c.se[g]);
            yhi = std::max(yhi, c.mean[g] + 2.0 * c.se[g]);
        }
    if (!(ylo < yhi)) {
        ylo = ylo - 1.0;
        yhi = yhi + 1.0;
    }
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
    const double xmax = budget > 0.0 ? budget : 1.0;
    auto sx = [&](double v) { return L + (W - L - Rm) * v / xmax; };
    auto sy = [&](double v) { return H - Bm - (H - T - Bm) * (v - ylo) / (yhi - ylo); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    // axes and ticks
    os << "<g stroke=\"#444\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<line x1=\"" << px(L) << "\" y1=\"" << px(H - Bm) << "\" x2=\"" << px(W - Rm)
       << "\" y2=\"" << px(H - Bm) << "\"/>\n";
    os << "<line x1=\"" << px(L) << "\" y1=\"" << px(T) << "\" x2=\"" << px(L) << "\" y2=\""
       << px(H - Bm) << "\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmax * i / 5.0;
        os << "<line x1=\"" << px(sx(xv)) << "\" y1=\"" << px(H - Bm) << "\" x2=\"" << px(sx(xv))
           << "\" y2=\"" << px(H - Bm + 5) << "\"/>\n";
        os << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(H - Bm + 20)
           << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#444\">" << tick_label(xv)
           << "</text>\n";
        const double yv = ylo + (yhi - ylo) * i / 5.0;
        os << "<line x1=\"" << px(L - 5) << "\" y1=\"" << px(sy(yv)) << "\" x2=\"" << px(L)
           << "\" y2=\"" << px(sy(yv)) << "\"/>\n";
        os << "<text x=\"" << px(L - 8) << "\" y=\"" << px(sy(yv) + 4)
           << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#444\">" << tick_label(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << px((L + W - Rm) / 2) << "\" y=\"" << px(H - 12)
       << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#444\">budget spent</text>\n";
    os << "<text x=\"16\" y=\"" << px((T + H - Bm) / 2)
       << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#444\" transform=\"rotate(-90 16 "
       << px((T + H - Bm) / 2) << ")\">ground-truth metric</text>\n";
    os << "</g>\n";

    for (size_t ci = 0; ci < curves.size(); ++ci) {
        const AlgoCurve& c = curves[ci];
        const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (grid.size() == 0) continue;
        // +-2 SE band, stepped like the mean
        std::string band = "M" + px(sx(grid[0])) + "," + px(sy(c.mean[0] + 2 * c.se[0]));
        for (Eigen::Index g = 1; g < grid.size(); ++g) {
            band += "H" + px(sx(grid[g]));
            band += "V" + px(sy(c.mean[g] + 2 * c.se[g]));
        }
        band += "H" + px(sx(xmax));
        for (Eigen::Index g = grid.size() - 1; g >= 0; --g) {
            band += g + 1 < grid.size() ? "H" + px(sx(grid[g + 1])) : "H" + px(sx(xmax));
            band += "V" + px(sy(c.mean[g] - 2 * c.se[g]));
        }
        band += "H" + px(sx(grid[0])) + "Z";
        os << "<path d=\"" << band << "\" fill=\"" << color
           << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        std::string line = "M" + px(sx(grid[0])) + "," + px(sy(c.mean[0]));
        for (Eigen::Index g = 1; g < grid.size(); ++g) {
            line += "H" + px(sx(grid[g]));
            line += "V" + px(sy(c.mean[g]));
        }
        line += "H" + px(sx(xmax));
        os << "<path d=\"" << line << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        const double ly = T + 16 + 18.0 * static_cast<double>(ci);
        os << "<line x1=\"" << px(L + 10) << "\" y1=\"" << px(ly - 4) << "\" x2=\"" << px(L + 34)
           << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << px(L + 40) << "\" y=\"" << px(ly)
           << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">" << c.algo
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

AggregateReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ProblemInstance p = build_problem(cfg);
    const double B = cfg.budget > 0.0 ? cfg.budget : p.budget;
    require(B > 0.0, "experiment budget must be positive");

    std::vector<Algo> algos;
    for (const std::string& a : cfg.algorithms) algos.push_back(algo_from_name(a));
    const int R = cfg.replications;

    std::vector<NetworkHistory> inits;
    inits.reserve(R);
    for (int r = 0; r < R; ++r)
        inits.push_back(
            initial_design(p, p.n_init, derive_seed(cfg.seed, {100, static_cast<std::uint64_t>(r)})));

    AggregateReport rep;
    rep.problem = p.name;
    rep.budget = B;
    rep.runs.assign(algos.size(), std::vector<RunRecord>(R));

    std::vector<std::pair<size_t, int>> jobs;
    for (size_t a = 0; a < algos.size(); ++a)
        for (int r = 0; r < R; ++r) jobs.emplace_back(a, r);
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const size_t j = cursor.fetch_add(1);
            if (j >= jobs.size()) break;
            const auto [a, r] = jobs[j];
            const std::uint64_t run_seed = derive_seed(
                cfg.seed, {101, static_cast<std::uint64_t>(algos[a]), static_cast<std::uint64_t>(r)});
            rep.runs[a][r] = run_bo(p, algos[a], B, cfg.loop_config(run_seed), &inits[r]);
        }
    };
    const int workers = std::min<int>(cfg.threads, static_cast<int>(jobs.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    // union spend grid over every run of every algorithm
    std::vector<double> pts;
    for (const auto& per_algo : rep.runs)
        for (const RunRecord& run : per_algo)
            for (const IterRow& row : run.rows) pts.push_back(row.spent);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    rep.grid = Eigen::Map<const Vec>(pts.data(), static_cast<Eigen::Index>(pts.size()));

    const int K = p.spec.K();
    for (size_t a = 0; a < algos.size(); ++a) {
        AlgoCurve c;
        c.algo = cfg.algorithms[a];
        const Eigen::Index G = rep.grid.size();
        // runs that aborted before producing any row carry no information
        std::vector<const RunRecord*> usable;
        for (const RunRecord& run : rep.runs[a])
            if (!run.rows.empty()) usable.push_back(&run);
        const int n = static_cast<int>(usable.size());
        require(n > 0, "algorithm '" + c.algo + "' produced no usable runs");
        Mat vals(n, G);
        Vec tmp(G);
        for (int r = 0; r < n; ++r) {
            locf_row(usable[r]->rows, rep.grid, tmp);
            vals.row(r) = tmp.transpose();
        }
        c.mean = vals.colwise().mean();
        if (n > 1) {
            Mat centered = vals.rowwise() - c.mean.transpose();
            const Vec var = centered.array().square().colwise().sum() / (n - 1.0);
            c.se = (var / n).cwiseSqrt();
        } else {
            c.se = Vec::Zero(G);
        }
        c.node_means = Vec::Zero(K);
        double total_ms = 0.0;
        long total_rows = 0;
        for (const RunRecord* run : usable) {
            for (int k = 0; k < K; ++k) c.node_means[k] += run->node_counts[k];
            for (const IterRow& row : run->rows) total_ms += row.wall_ms;
            total_rows += static_cast<long>(run->rows.size());
        }
        c.node_means /= n;
        c.mean_run_ms = total_ms / n;
        c.mean_iter_ms = total_rows > 0 ? total_ms / static_cast<double>(total_rows) : 0.0;
        rep.curves.push_back(std::move(c));
    }

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(fs::path(cfg.out_dir) / "runs");
        for (size_t a = 0; a < algos.size(); ++a)
            for (int r = 0; r < R; ++r)
                write_file((fs::path(cfg.out_dir) / "runs" /
                            (cfg.algorithms[a] + "_" + std::to_string(r) + ".csv"))
                               .string(),
                           rep.runs[a][r].to_csv());
        write_file((fs::path(cfg.out_dir) / "aggregate.csv").string(), rep.aggregate_csv());
        write_file((fs::path(cfg.out_dir) / "node_counts.csv").string(), rep.node_counts_csv());
        write_file((fs::path(cfg.out_dir) / "timings.csv").string(), rep.timings_csv());
        write_file((fs::path(cfg.out_dir) / "curves.svg").string(), rep.curves_svg());
        write_file((fs::path(cfg.out_dir) / "config.toml").string(), cfg.to_toml());
    }
    return rep;
}

std::string CompareReport::to_csv() const {
    std::string s = "snapshot,I,method,A,value,wall_ms\n";
    for (const CompareRow& r : rows) {
        s += std::to_string(r.snapshot);
        s += ',';
        s += std::to_string(r.I);
        s += ',';
        s += r.method;
        s += ',';
        s += std::to_string(r.A);
        s += ',';
        s += fmt_g17(r.value);
        s += ',';
        s += fmt_g17(r.wall_ms);
        s += '\n';
    }
    return s;
}

CompareReport compare_optimizers(const ExperimentConfig& cfg) {
    cfg.validate();
    const ProblemInstance p = make_problem("ackley6d");
    const NetworkSpec& spec = p.spec;
    const int node = 0;
    const double cost = spec.nodes[node].cost;
    const Vec tuple(0);  // the first node has no parents

    MultiStartConfig ms;
    ms.raw_per_dim = cfg.raw_per_dim;
    ms.starts_per_dim = cfg.starts_per_dim;
    ms.ascent_iters = cfg.ascent_iters;

    CompareReport out;
    for (const int snap : cfg.compare_snapshots) {
        const std::uint64_t st = static_cast<std::uint64_t>(snap);
        const NetworkHistory hist =
            initial_design(p, snap, derive_seed(cfg.seed, {200, st}));
        const std::vector<NodeGP> gps =
            fit_network(p, hist, cfg.fit_restarts, derive_seed(cfg.seed, {201, st}));
        const NetworkPosterior post(spec, gps);

        // common high-precision scorer shared by every cell of this snapshot
        const BaseSampleSet bs_score =
            make_base_samples(cfg.score_I, cfg.score_J, spec.K(),
                              derive_seed(cfg.seed, {202, st}), cfg.qmc, cfg.antithetic);
        InnerSetConfig icfg_score;
        icfg_score.n_thompson = 20;
        icfg_score.n_local = 20;
        icfg_score.local_radius = cfg.local_radius;
        icfg_score.seed = derive_seed(cfg.seed, {203, st});
        MultiStartConfig rec_ms = ms;
        rec_ms.seed = derive_seed(cfg.seed, {204, st});
        const Recommendation rec = recommend(post, bs_score.inner, icfg_score, rec_ms);
        double nu_score = -std::numeric_limits<double>::infinity();
        for (const Vec& a : rec.inner_set)
            nu_score = std::max(nu_score, estimate_nu(post, a, bs_score.inner));
        const PkgfnEvaluator scorer(post, bs_score, node, rec.inner_set, nu_score, cost);

        for (const int I : cfg.compare_I) {
            const std::uint64_t it = static_cast<std::uint64_t>(I);
            const BaseSampleSet bs_opt =
                make_base_samples(I, cfg.J, spec.K(), derive_seed(cfg.seed, {205, st, it}),
                                  cfg.qmc, cfg.antithetic);
            for (const int A : cfg.compare_A) {
                InnerSetConfig icfg;
                icfg.n_thompson = (A - 1) / 2;
                icfg.n_local = (A - 1) / 2;
                icfg.local_radius = cfg.local_radius;
                icfg.seed = derive_seed(cfg.seed, {206, st, it, static_cast<std::uint64_t>(A)});
                const std::vector<Vec> inner = build_inner_set(post, rec.x, icfg);
                double nu_opt = -std::numeric_limits<double>::infinity();
                for (const Vec& a : inner)
                    nu_opt = std::max(nu_opt, estimate_nu(post, a, bs_opt.inner));
                MultiStartConfig dms = ms;
                dms.seed = derive_seed(cfg.seed, {207, st, it, static_cast<std::uint64_t>(A)});
                const Clock::time_point t0 = Clock::now();
                const PkgfnEvaluator ev(post, bs_opt, node, inner, nu_opt, cost);
                const NodeChoice ch = maximize_node_acq(ev, spec, hist, dms);
                const double wall = ms_since(t0);
                CompareRow row;
                row.snapshot = snap;
                row.I = I;
                row.method = "discretization";
                row.A = A;
                row.value = ch.feasible ? scorer.value(ch.cand.z()) : -1.0;
                row.wall_ms = wall;
                out.rows.push_back(row);
            }
            const double nu_opt = estimate_nu(post, rec.x, bs_opt.inner);
            MultiStartConfig oms = ms;
            oms.seed = derive_seed(cfg.seed, {208, st, it});
            const Clock::time_point t0 = Clock::now();
            const OneShotResult os = one_shot_maximize(post, bs_opt, node, tuple, nu_opt, cost, oms);
            const double wall = ms_since(t0);
            CompareRow row;
            row.snapshot = snap;
            row.I = I;
            row.method = "one_shot";
            row.A = 0;
            row.value = scorer.value(os.z);
            row.wall_ms = wall;
            out.rows.push_back(row);
        }
    }
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_file((std::filesystem::path(cfg.out_dir) / "optimizer_comparison.csv").string(),
                   out.to_csv());
    }
    return out;
}

}  // namespace fnbo
