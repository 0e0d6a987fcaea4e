#pragma once

#include <functional>

#include "fnbo/common.hpp"

namespace fnbo {

using Objective = std::function<double(const Vec&)>;

struct AscentOptions {
    int max_iters = 60;
    double fd_step_frac = 1e-4;   // FD step as a fraction of each box width
    double grad_tol = 1e-8;       // projected-gradient infinity norm
    int lbfgs_history = 6;
};

struct AscentResult {
    Vec x;
    double value = 0.0;
    int iters = 0;
};

/// Maximizes f over the box [lo,hi] by projected L-BFGS ascent with central
/// finite-difference gradients. Never returns a value below f(x0).
AscentResult maximize_box(const Objective& f, Vec x0, const Vec& lo, const Vec& hi,
                          const AscentOptions& opts = {});

/// Raw-sample screening followed by local ascent from the best `starts` samples.
AscentResult multistart_maximize(const Objective& f, const Vec& lo, const Vec& hi,
                                 int raw_samples, int starts, std::uint64_t seed,
                                 const AscentOptions& opts = {});

}  // namespace fnbo
