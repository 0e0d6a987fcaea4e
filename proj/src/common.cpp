#include "fnbo/common.hpp"

#include <array>
#include <cmath>

namespace fnbo {

// Wichura's AS241 (PPND16): inverse standard normal CDF to double precision.
double norm_ppf(double p) {
    require(p > 0.0 && p < 1.0, "norm_ppf: p must be in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

namespace {

// primitive polynomial, degree, initial m values (Joe-Kuo) for dims 2..32
const struct SobolInit { std::uint32_t poly; int s; std::uint32_t m[8]; } kSobolInit[31] = {
    {3u, 1, {1u, 0u, 0u, 0u, 0u, 0u, 0u, 0u}},
    {7u, 2, {1u, 3u, 0u, 0u, 0u, 0u, 0u, 0u}},
    {11u, 3, {1u, 3u, 1u, 0u, 0u, 0u, 0u, 0u}},
    {13u, 3, {1u, 1u, 1u, 0u, 0u, 0u, 0u, 0u}},
    {19u, 4, {1u, 1u, 3u, 3u, 0u, 0u, 0u, 0u}},
    {25u, 4, {1u, 3u, 5u, 13u, 0u, 0u, 0u, 0u}},
    {37u, 5, {1u, 1u, 5u, 5u, 17u, 0u, 0u, 0u}},
    {41u, 5, {1u, 1u, 5u, 5u, 5u, 0u, 0u, 0u}},
    {47u, 5, {1u, 1u, 7u, 11u, 19u, 0u, 0u, 0u}},
    {55u, 5, {1u, 1u, 5u, 1u, 1u, 0u, 0u, 0u}},
    {59u, 5, {1u, 1u, 1u, 3u, 11u, 0u, 0u, 0u}},
    {61u, 5, {1u, 3u, 5u, 5u, 31u, 0u, 0u, 0u}},
    {67u, 6, {1u, 3u, 3u, 9u, 7u, 49u, 0u, 0u}},
    {91u, 6, {1u, 1u, 1u, 15u, 21u, 21u, 0u, 0u}},
    {97u, 6, {1u, 3u, 1u, 13u, 27u, 49u, 0u, 0u}},
    {103u, 6, {1u, 1u, 1u, 15u, 7u, 5u, 0u, 0u}},
    {109u, 6, {1u, 3u, 1u, 15u, 13u, 25u, 0u, 0u}},
    {115u, 6, {1u, 1u, 5u, 5u, 19u, 61u, 0u, 0u}},
    {131u, 7, {1u, 3u, 7u, 11u, 23u, 15u, 103u, 0u}},
    {137u, 7, {1u, 3u, 7u, 13u, 13u, 15u, 69u, 0u}},
    {143u, 7, {1u, 1u, 3u, 13u, 7u, 35u, 63u, 0u}},
    {145u, 7, {1u, 3u, 5u, 9u, 1u, 25u, 53u, 0u}},
    {157u, 7, {1u, 3u, 1u, 13u, 9u, 35u, 107u, 0u}},
    {167u, 7, {1u, 3u, 1u, 5u, 27u, 61u, 31u, 0u}},
    {171u, 7, {1u, 1u, 5u, 11u, 19u, 41u, 61u, 0u}},
    {185u, 7, {1u, 3u, 5u, 3u, 3u, 13u, 69u, 0u}},
    {191u, 7, {1u, 1u, 7u, 13u, 1u, 19u, 1u, 0u}},
    {193u, 7, {1u, 3u, 7u, 5u, 13u, 19u, 59u, 0u}},
    {203u, 7, {1u, 1u, 3u, 9u, 25u, 29u, 41u, 0u}},
    {211u, 7, {1u, 3u, 5u, 13u, 23u, 1u, 55u, 0u}},
    {213u, 7, {1u, 3u, 7u, 3u, 13u, 59u, 17u, 0u}},
};

constexpr int kMaxBit = 30;

}  // namespace

Sobol::Sobol(int dim, std::uint64_t scramble_seed, bool scramble) : dim_(dim) {
    require(dim >= 1 && dim <= 32, "Sobol: dim must be in [1,32]");
    v_.resize(dim);
    state_.assign(dim, 0u);
    shift_.assign(dim, 0u);
    // dimension 1: van der Corput (all m_i = 1)
    for (int i = 1; i <= kMaxBit; ++i) v_[0][i] = 1u << (kMaxBit - i);
    for (int j = 1; j < dim; ++j) {
        const SobolInit& init = kSobolInit[j - 1];
        const int s = init.s;
        std::uint32_t m[kMaxBit + 1];
        for (int i = 0; i < s; ++i) m[i] = init.m[i];
        for (int i = s; i < kMaxBit; ++i) {
            std::uint32_t nv = m[i - s] ^ (m[i - s] << s);
            for (int k = 1; k < s; ++k)
                if ((init.poly >> (s - k)) & 1u) nv ^= (m[i - k] << k);
            m[i] = nv;
        }
        for (int i = 1; i <= kMaxBit; ++i) v_[j][i] = m[i - 1] << (kMaxBit - i);
    }
    if (scramble) {
        Rng rng(mix64(scramble_seed ^ 0x50b01a11ull));
        for (int j = 0; j < dim; ++j)
            shift_[j] = static_cast<std::uint32_t>(rng.next_u64()) & ((1u << kMaxBit) - 1u);
    }
}

Vec Sobol::next() {
    Vec out(dim_);
    const double scale = 1.0 / static_cast<double>(1u << kMaxBit);
    if (index_ == 0) {
        for (int j = 0; j < dim_; ++j) out[j] = shift_[j] * scale;
        ++index_;
        return out;
    }
    // gray-code: flip the direction number of the lowest zero bit of (index-1)
    std::uint64_t g = index_ - 1;
    int c = 1;
    while (g & 1ull) { g >>= 1; ++c; }
    for (int j = 0; j < dim_; ++j) {
        state_[j] ^= v_[j][c];
        out[j] = (state_[j] ^ shift_[j]) * scale;
    }
    ++index_;
    return out;
}

}  // namespace fnbo
