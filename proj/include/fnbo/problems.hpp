#pragma once

#include "fnbo/network.hpp"

namespace fnbo {

/// A benchmark problem: network structure, ground-truth node functions, and
/// the experiment defaults that go with them.
struct ProblemInstance {
    NetworkSpec spec;
    Truth truth;
    HyperPrior prior;     // hyperprior for node GP fits
    double budget = 0.0;  // default evaluation budget (initial design excluded)
    int n_init = 0;       // initial full evaluations, 2d+1
    Vec noise_std;        // per-node observation noise std, zeros by default
    std::string name;

    bool noisy() const { return noise_std.size() > 0 && noise_std.maxCoeff() > 0.0; }
    /// Noise-free ground-truth composite at x.
    double metric(const Vec& x) const { return true_composite(spec, truth, x); }
};

/// Deterministic Matern 5/2 prior sample path via random Fourier features
/// (spectral density = scaled multivariate t with 5 dof).
NodeFn rff_sample_path(int dim, double lengthscale, double outputscale, std::uint64_t seed,
                       int n_features = 2048);

/// 1-D two-stage chain: f1(x) = sin x + 2 sin 2x on [-4,4], f2(y) = sin(3(y-1)/4).
ProblemInstance toy_1d();
/// Negated 6-D Ackley on [-2,2]^6 feeding f2(y) = -y sin(5y/(6 pi)).
ProblemInstance ackley6d();
/// Four-node manufacturing network on [-1,1]^4 with GP sample-path truths.
ProblemInstance manu_gp(std::uint64_t seed);
/// Two parallel 4-D tablet-property nodes on [-1,1]^4 plus a known score combiner.
ProblemInstance pharm();
/// Positive 6-D Ackley feeding a negated Matyas node probed anywhere in
/// y in [0,20], x7 in [-10,10] (no upstream-output restriction).
ProblemInstance ackmat();
/// 1-D two-node chain of GP sample paths, downstream rougher (ls 0.5 vs 0.25).
ProblemInstance gps_1(std::uint64_t seed);
/// Three 1-D root sample paths feeding a 3-ary GP sample-path sink.
ProblemInstance gps_2(std::uint64_t seed);

/// Same problem with iid N(0, std^2) noise on every GP-node observation.
ProblemInstance with_noise(ProblemInstance p, double std);

std::vector<std::string> problem_names();
/// Lookup by registry name; `seed` feeds the sample-path problems.
ProblemInstance make_problem(const std::string& name, std::uint64_t seed = 0);

}  // namespace fnbo
