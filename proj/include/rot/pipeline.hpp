#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rot/calibration.hpp"
#include "rot/statistic.hpp"
#include "rot/transform.hpp"

namespace rot {

struct MissingTableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TestReport {
    std::size_t p = 0;
    int K = 1;
    int kstar = 1;
    double rho = 0.0;
    std::vector<std::pair<int, double>> components;  // ladder entry -> value
    int argmax_i = 1;
    double log10_pvalue = 0.0;
    double pvalue = 1.0;  // 0 when underflowed; log10_pvalue is authoritative
    bool extrapolated = false;
    std::vector<std::string> warnings;
};

// Full procedure: transform, tail collapse, omnibus statistic, table
// lookup. Kstar = 1 takes the analytic path and needs no table; any other
// Kstar must be present in `tables` or MissingTableError is thrown with
// guidance.
TestReport run_rot_test(const LogPValueVector& input, const PriorWeights& weights,
                        int K, const TableSet& tables,
                        const TransformOptions& opts = {});

std::string report_to_text(const TestReport& r);
std::string report_to_json(const TestReport& r);

}  // namespace rot
