#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rot/rng.hpp"

namespace rot_test {

// One-sample Kolmogorov-Smirnov distance against a CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

// Asymptotic critical value c(alpha)/sqrt(n).
inline double ks_critical(double alpha, std::size_t n) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline double exp1_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

inline double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

inline std::vector<double> random_log_uniforms(std::size_t p, std::uint64_t seed) {
    rot::Xoshiro256pp rng(seed);
    std::vector<double> logp(p);
    for (auto& v : logp) v = std::log(rng.next_unit());
    return logp;
}

}  // namespace rot_test
