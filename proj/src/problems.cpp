#include "fnbo/problems.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace fnbo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sig(double t) { return 1.0 / (1.0 + std::exp(-t)); }

Vec constant_vec(int n, double v) { return Vec::Constant(n, v); }

std::vector<int> iota_inputs(int from, int count) {
    std::vector<int> v(count);
    for (int i = 0; i < count; ++i) v[i] = from + i;
    return v;
}

}  // namespace

NodeFn rff_sample_path(int dim, double lengthscale, double outputscale, std::uint64_t seed,
                       int n_features) {
    Rng rng(seed);
    auto omega = std::make_shared<Mat>(n_features, dim);
    auto phase = std::make_shared<Vec>(n_features);
    auto weight = std::make_shared<Vec>(n_features);
    for (int m = 0; m < n_features; ++m) {
        // Matern 5/2 spectral draw: N(0, I/ls^2) scaled by sqrt(5 / chi^2_5)
        double chi2 = 0.0;
        Vec z(dim);
        for (int j = 0; j < dim; ++j) z[j] = rng.normal();
        for (int r = 0; r < 5; ++r) {
            const double g = rng.normal();
            chi2 += g * g;
        }
        omega->row(m) = (z / lengthscale * std::sqrt(5.0 / chi2)).transpose();
        (*phase)[m] = rng.uniform(0.0, 2.0 * kPi);
        (*weight)[m] = rng.normal();
    }
    const double amp = std::sqrt(2.0 * outputscale / n_features);
    return [=](const Vec& x) {
        const Vec t = (*omega) * x + (*phase);
        return amp * weight->dot(t.array().cos().matrix());
    };
}

ProblemInstance toy_1d() {
    ProblemInstance p;
    p.name = "toy_1d";
    p.spec.name = "toy_1d";
    p.spec.d = 1;
    p.spec.lower = constant_vec(1, -4.0);
    p.spec.upper = constant_vec(1, 4.0);
    p.spec.nodes.resize(2);
    p.spec.nodes[0].inputs = {0};
    p.spec.nodes[0].cost = 1.0;
    p.spec.nodes[1].parents = {0};
    p.spec.nodes[1].cost = 49.0;
    p.truth = {
        [](const Vec& z) { return std::sin(z[0]) + 2.0 * std::sin(2.0 * z[0]); },
        [](const Vec& z) { return std::sin(3.0 * (z[0] - 1.0) / 4.0); },
    };
    p.budget = 150.0;
    p.n_init = 3;
    p.noise_std = Vec::Zero(2);
    p.spec.validate();
    return p;
}

ProblemInstance ackley6d() {
    ProblemInstance p;
    p.name = "ackley6d";
    p.spec.name = "ackley6d";
    p.spec.d = 6;
    p.spec.lower = constant_vec(6, -2.0);
    p.spec.upper = constant_vec(6, 2.0);
    p.spec.nodes.resize(2);
    p.spec.nodes[0].inputs = iota_inputs(0, 6);
    p.spec.nodes[0].cost = 1.0;
    p.spec.nodes[1].parents = {0};
    p.spec.nodes[1].cost = 49.0;
    p.truth = {
        [](const Vec& z) {
            const double ms = z.squaredNorm() / 6.0;
            const double mc = (2.0 * kPi * z.array()).cos().mean();
            return 20.0 * std::exp(-0.2 * std::sqrt(ms)) + std::exp(mc) - 20.0 - std::exp(1.0);
        },
        [](const Vec& z) { return -z[0] * std::sin(5.0 * z[0] / (6.0 * kPi)); },
    };
    p.budget = 700.0;
    p.n_init = 13;
    p.noise_std = Vec::Zero(2);
    p.spec.validate();
    return p;
}

ProblemInstance manu_gp(std::uint64_t seed) {
    ProblemInstance p;
    p.name = "manu_gp";
    p.spec.name = "manu_gp";
    p.spec.d = 4;
    p.spec.lower = constant_vec(4, -1.0);
    p.spec.upper = constant_vec(4, 1.0);
    p.spec.nodes.resize(4);
    p.spec.nodes[0].inputs = {0, 1};
    p.spec.nodes[0].cost = 5.0;
    p.spec.nodes[1].parents = {0};
    p.spec.nodes[1].cost = 10.0;
    p.spec.nodes[2].inputs = {2, 3};
    p.spec.nodes[2].cost = 10.0;
    p.spec.nodes[3].parents = {1, 2};
    p.spec.nodes[3].cost = 45.0;
    p.truth = {
        rff_sample_path(2, 0.631, 0.631, derive_seed(seed, {101})),
        rff_sample_path(1, 1.0, 0.631, derive_seed(seed, {102})),
        rff_sample_path(2, 1.0, 0.631, derive_seed(seed, {103})),
        rff_sample_path(2, 3.0, 10.0, derive_seed(seed, {104})),
    };
    p.prior.lengthscale = GammaPrior{5.0, 2.0};
    p.budget = 700.0;
    p.n_init = 9;
    p.noise_std = Vec::Zero(4);
    p.spec.validate();
    return p;
}

ProblemInstance pharm() {
    ProblemInstance p;
    p.name = "pharm";
    p.spec.name = "pharm";
    p.spec.d = 4;
    p.spec.lower = constant_vec(4, -1.0);
    p.spec.upper = constant_vec(4, 1.0);
    p.spec.nodes.resize(3);
    p.spec.nodes[0].inputs = {0, 1, 2, 3};
    p.spec.nodes[0].cost = 1.0;
    p.spec.nodes[1].inputs = {0, 1, 2, 3};
    p.spec.nodes[1].cost = 49.0;
    p.spec.nodes[2].parents = {0, 1};
    p.spec.nodes[2].cost = 0.0;
    p.spec.nodes[2].known = true;
    p.spec.nodes[2].known_fn = [](const Vec& z) { return (60.0 - z[0]) / 60.0 * z[1] / 1.5; };
    p.truth = {
        // disintegration time
        [](const Vec& x) {
            return -3.95 +
                   9.20 * sig(0.32 + 5.06 * x[0] - 4.07 * x[1] - 0.36 * x[2] - 0.34 * x[3]) +
                   9.88 * sig(-4.83 + 7.43 * x[0] + 3.46 * x[1] + 9.19 * x[2] + 16.58 * x[3]) +
                   10.84 * sig(7.90 + 7.91 * x[0] + 4.48 * x[1] + 4.08 * x[2] + 8.28 * x[3]) +
                   15.18 * sig(9.41 - 7.99 * x[0] + 0.65 * x[1] + 3.14 * x[2] + 0.31 * x[3]);
        },
        // tensile strength
        [](const Vec& x) {
            return 1.07 +
                   0.62 * sig(3.05 + 0.03 * x[0] - 0.16 * x[1] + 4.03 * x[2] - 0.54 * x[3]) +
                   0.65 * sig(1.78 + 0.60 * x[0] - 3.19 * x[1] + 0.10 * x[2] + 0.54 * x[3]) -
                   0.72 * sig(0.01 + 2.04 * x[0] - 3.73 * x[1] + 0.10 * x[2] - 1.05 * x[3]) -
                   0.45 * sig(1.82 + 4.78 * x[0] + 0.48 * x[1] - 4.68 * x[2] - 1.65 * x[3]) -
                   0.32 * sig(2.69 + 5.99 * x[0] + 3.87 * x[1] + 3.10 * x[2] - 2.17 * x[3]);
        },
        [](const Vec& z) { return (60.0 - z[0]) / 60.0 * z[1] / 1.5; },
    };
    p.budget = 700.0;
    p.n_init = 9;
    p.noise_std = Vec::Zero(3);
    p.spec.validate();
    return p;
}

ProblemInstance ackmat() {
    ProblemInstance p;
    p.name = "ackmat";
    p.spec.name = "ackmat";
    p.spec.d = 7;
    p.spec.lower = constant_vec(7, -2.0);
    p.spec.upper = constant_vec(7, 2.0);
    p.spec.lower[6] = -10.0;
    p.spec.upper[6] = 10.0;
    p.spec.nodes.resize(2);
    p.spec.nodes[0].inputs = iota_inputs(0, 6);
    p.spec.nodes[0].cost = 1.0;
    p.spec.nodes[1].parents = {0};
    p.spec.nodes[1].inputs = {6};
    p.spec.nodes[1].cost = 49.0;
    p.spec.nodes[1].free_parents = true;
    p.spec.nodes[1].parent_lo = constant_vec(1, 0.0);
    p.spec.nodes[1].parent_hi = constant_vec(1, 20.0);
    p.truth = {
        [](const Vec& z) {
            const double ms = z.squaredNorm() / 6.0;
            const double mc = (2.0 * kPi * z.array()).cos().mean();
            return -20.0 * std::exp(-0.2 * std::sqrt(ms)) - std::exp(mc) + 20.0 + std::exp(1.0);
        },
        [](const Vec& z) {
            return -0.26 * (z[0] * z[0] + z[1] * z[1]) + 0.48 * z[0] * z[1];
        },
    };
    p.budget = 700.0;
    p.n_init = 15;
    p.noise_std = Vec::Zero(2);
    p.spec.validate();
    return p;
}

ProblemInstance gps_1(std::uint64_t seed) {
    ProblemInstance p;
    p.name = "gps_1";
    p.spec.name = "gps_1";
    p.spec.d = 1;
    p.spec.lower = constant_vec(1, -1.0);
    p.spec.upper = constant_vec(1, 1.0);
    p.spec.nodes.resize(2);
    p.spec.nodes[0].inputs = {0};
    p.spec.nodes[0].cost = 1.0;
    p.spec.nodes[1].parents = {0};
    p.spec.nodes[1].cost = 49.0;
    p.truth = {
        rff_sample_path(1, 0.5, 1.0, derive_seed(seed, {111})),
        rff_sample_path(1, 0.25, 1.0, derive_seed(seed, {112})),
    };
    p.budget = 700.0;
    p.n_init = 3;
    p.noise_std = Vec::Zero(2);
    p.spec.validate();
    return p;
}

ProblemInstance gps_2(std::uint64_t seed) {
    ProblemInstance p;
    p.name = "gps_2";
    p.spec.name = "gps_2";
    p.spec.d = 3;
    p.spec.lower = constant_vec(3, -1.0);
    p.spec.upper = constant_vec(3, 1.0);
    p.spec.nodes.resize(4);
    for (int k = 0; k < 3; ++k) {
        p.spec.nodes[k].inputs = {k};
        p.spec.nodes[k].cost = 1.0;
    }
    p.spec.nodes[3].parents = {0, 1, 2};
    p.spec.nodes[3].cost = 47.0;
    p.truth = {
        rff_sample_path(1, 0.5, 1.0, derive_seed(seed, {121})),
        rff_sample_path(1, 0.5, 1.0, derive_seed(seed, {122})),
        rff_sample_path(1, 0.5, 1.0, derive_seed(seed, {123})),
        rff_sample_path(3, 0.5, 1.0, derive_seed(seed, {124})),
    };
    p.budget = 700.0;
    p.n_init = 7;
    p.noise_std = Vec::Zero(4);
    p.spec.validate();
    return p;
}

ProblemInstance with_noise(ProblemInstance p, double std) {
    if (std < 0.0) throw std::invalid_argument("with_noise: std must be >= 0");
    for (int k = 0; k < p.spec.K(); ++k)
        p.noise_std[k] = p.spec.nodes[k].known ? 0.0 : std;
    if (std > 0.0) p.name += "+noise";
    return p;
}

std::vector<std::string> problem_names() {
    return {"toy_1d", "ackley6d", "manu_gp", "pharm", "ackmat", "gps_1", "gps_2"};
}

ProblemInstance make_problem(const std::string& name, std::uint64_t seed) {
    if (name == "toy_1d") return toy_1d();
    if (name == "ackley6d") return ackley6d();
    if (name == "manu_gp") return manu_gp(seed);
    if (name == "pharm") return pharm();
    if (name == "ackmat") return ackmat();
    if (name == "gps_1") return gps_1(seed);
    if (name == "gps_2") return gps_2(seed);
    throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace fnbo
