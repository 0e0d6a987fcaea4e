#include "fnbo/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace fnbo {

namespace {

Vec clip(Vec x, const Vec& lo, const Vec& hi) {
    for (int i = 0; i < x.size(); ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
    return x;
}

// central differences, falling back to one-sided at box faces
Vec fd_gradient(const Objective& f, const Vec& x, const Vec& lo, const Vec& hi,
                double step_frac, double fx) {
    const int n = static_cast<int>(x.size());
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        double h = step_frac * (hi[i] - lo[i]);
        if (h <= 0.0) { g[i] = 0.0; continue; }
        Vec xp = x, xm = x;
        xp[i] = std::min(x[i] + h, hi[i]);
        xm[i] = std::max(x[i] - h, lo[i]);
        double denom = xp[i] - xm[i];
        if (denom <= 0.0) { g[i] = 0.0; continue; }
        double fp = (xp[i] == x[i]) ? fx : f(xp);
        double fm = (xm[i] == x[i]) ? fx : f(xm);
        g[i] = (fp - fm) / denom;
    }
    return g;
}

}  // namespace

AscentResult maximize_box(const Objective& f, Vec x0, const Vec& lo, const Vec& hi,
                          const AscentOptions& opts) {
    x0 = clip(std::move(x0), lo, hi);
    AscentResult best{x0, f(x0), 0};
    Vec x = x0;
    double fx = best.value;
    Vec g = fd_gradient(f, x, lo, hi, opts.fd_step_frac, fx);

    std::deque<Vec> s_hist, y_hist;
    std::deque<double> rho_hist;

    // All stopping and acceptance tests are relative, so the iterate sequence
    // is invariant under positive rescaling of f (only its values scale).
    const double box_scale = (hi - lo).maxCoeff();
    double pg0_norm = -1.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        best.iters = it + 1;
        // projected-gradient convergence check, relative to the initial norm
        Vec pg = g;
        for (int i = 0; i < x.size(); ++i) {
            if (x[i] <= lo[i] && g[i] < 0) pg[i] = 0;
            if (x[i] >= hi[i] && g[i] > 0) pg[i] = 0;
        }
        const double pg_norm = pg.lpNorm<Eigen::Infinity>();
        if (pg0_norm < 0.0) pg0_norm = pg_norm;
        if (pg_norm <= opts.grad_tol * pg0_norm) break;

        // L-BFGS two-loop on the ascent direction
        Vec d = g;
        if (!s_hist.empty()) {
            std::vector<double> alpha(s_hist.size());
            for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
                alpha[i] = rho_hist[i] * s_hist[i].dot(d);
                d -= alpha[i] * y_hist[i];
            }
            const Vec& sl = s_hist.back();
            const Vec& yl = y_hist.back();
            double yy = yl.dot(yl);
            if (yy > 0) d *= sl.dot(yl) / yy;
            for (std::size_t i = 0; i < s_hist.size(); ++i) {
                double beta = rho_hist[i] * y_hist[i].dot(d);
                d += (alpha[i] - beta) * s_hist[i];
            }
        }
        // without usable curvature, take a normalized gradient step whose
        // length depends only on the box, not on the objective's scale
        if (s_hist.empty() || d.dot(g) <= 0) d = g * (0.1 * box_scale / g.lpNorm<Eigen::Infinity>());

        // backtracking line search with projection
        double dn = d.lpNorm<Eigen::Infinity>();
        if (dn <= 0) break;
        double t = std::min(1.0, 0.25 * box_scale / dn);
        const double c1 = 1e-4;
        bool moved = false;
        Vec xn;
        double fn = fx;
        for (int ls = 0; ls < 20; ++ls) {
            xn = clip(x + t * d, lo, hi);
            if ((xn - x).lpNorm<Eigen::Infinity>() < 1e-15 * box_scale) break;
            fn = f(xn);
            if (fn >= fx + c1 * t * g.dot(d) || fn > fx) { moved = true; break; }
            t *= 0.5;
        }
        if (!moved) break;

        Vec gn = fd_gradient(f, xn, lo, hi, opts.fd_step_frac, fn);
        Vec s = xn - x;
        Vec yv = g - gn;  // ascent: curvature pair uses -grad difference of -f
        double sy = s.dot(yv);
        if (sy > 1e-10 * s.norm() * yv.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(yv);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.lbfgs_history) {
                s_hist.pop_front(); y_hist.pop_front(); rho_hist.pop_front();
            }
        }
        x = xn; fx = fn; g = gn;
        if (fx > best.value) { best.value = fx; best.x = x; }
    }
    if (fx > best.value) { best.value = fx; best.x = x; }
    return best;
}

AscentResult multistart_maximize(const Objective& f, const Vec& lo, const Vec& hi,
                                 int raw_samples, int starts, std::uint64_t seed,
                                 const AscentOptions& opts) {
    Rng rng(seed);
    raw_samples = std::max(raw_samples, 1);
    starts = std::max(std::min(starts, raw_samples), 1);
    std::vector<Vec> pts(raw_samples);
    std::vector<double> vals(raw_samples);
    for (int i = 0; i < raw_samples; ++i) {
        pts[i] = rng.uniform_vec(lo, hi);
        vals[i] = f(pts[i]);
    }
    std::vector<int> order(raw_samples);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });

    AscentResult best{pts[order[0]], vals[order[0]], 0};
    for (int s = 0; s < starts; ++s) {
        AscentResult r = maximize_box(f, pts[order[s]], lo, hi, opts);
        if (r.value > best.value) best = r;
    }
    return best;
}

}  // namespace fnbo
