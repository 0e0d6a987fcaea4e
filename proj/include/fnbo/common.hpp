#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fnbo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// splitmix64 step; used to derive independent seed streams from a base seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic seed for a named purpose, e.g. derive_seed(base, {rep, iter, 3}).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(base ^ 0xa5a5a5a5deadbeefull);
    for (auto t : tags) h = mix64(h ^ t);
    return h;
}

double norm_ppf(double p);

/// Round-trip-exact decimal text for CSV/TOML output.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double norm_pdf(double x) {
    static const double c = 0.3989422804014327;  // 1/sqrt(2*pi)
    return c * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

/// Wrapper around mt19937_64 with inverse-CDF normals so draws are identical
/// across platforms for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        // 53-bit mantissa in (0,1)
        return (static_cast<double>(eng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double normal() { return norm_ppf(uniform()); }
    double gamma(double shape, double rate) {
        std::gamma_distribution<double> g(shape, 1.0 / rate);
        return g(eng_);
    }
    std::uint64_t next_u64() { return eng_(); }
    int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

    Vec uniform_vec(const Vec& lo, const Vec& hi) {
        Vec x(lo.size());
        for (int i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
        return x;
    }

private:
    std::mt19937_64 eng_;
};

/// Sobol sequence (Joe-Kuo direction numbers, 30-bit, gray-code order),
/// optionally with a random digital shift. Supports up to 32 dimensions.
class Sobol {
public:
    explicit Sobol(int dim, std::uint64_t scramble_seed = 0, bool scramble = false);

    /// Next point in [0,1)^dim.
    Vec next();
    void skip(int n) { for (int i = 0; i < n; ++i) next(); }
    int dim() const { return dim_; }

private:
    int dim_;
    std::uint64_t index_ = 0;
    std::vector<std::uint32_t> state_;                // current XOR accumulator per dim
    std::vector<std::uint32_t> shift_;                // digital shift per dim (0 = none)
    std::vector<std::array<std::uint32_t, 31>> v_;    // direction integers per dim, bits 1..30
};

struct invalid_argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_argument_error(msg);
}

}  // namespace fnbo
