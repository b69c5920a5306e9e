#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rot/calibration.hpp"

namespace rot {

// Method under comparison: the omnibus test with bound K, the fixed-k sum
// test, or the Bonferroni-corrected minimum p-value.
struct MethodSpec {
    enum class Kind { rot, fixed_k, min_p };
    Kind kind = Kind::rot;
    int param = 1;  // K for rot, k for fixed_k, unused for min_p

    std::string name() const;
};

// Null scenario when n_outliers = 0; otherwise n_outliers of the p uniforms
// are scaled down by outlier_scale.
struct BenchConfig {
    std::size_t p = 1000;
    std::size_t n_outliers = 0;
    double outlier_scale = 1e-6;
    std::size_t replicates = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<MethodSpec> methods;
};

struct BenchRow {
    std::string method;
    std::size_t rejections = 0;
    std::size_t replicates = 0;
    double rate = 0.0;
    double std_error = 0.0;
};

// Per-method rejection rates at level alpha with Monte Carlo standard
// errors. All methods see the same replicates.
std::vector<BenchRow> run_power_bench(const BenchConfig& config,
                                      const TableSet& tables);

void write_bench_csv(std::ostream& out, const BenchConfig& config,
                     const std::vector<BenchRow>& rows);

// "rot:16,fixed:4,minp" -> method list.
std::vector<MethodSpec> parse_methods(const std::string& text);

}  // namespace rot
