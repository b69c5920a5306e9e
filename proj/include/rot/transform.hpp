#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rot {

// Default clamp for p-values of exactly zero in lenient mode: log(1e-320).
inline constexpr double kDefaultLogFloor = -736.8272297580946;

// Input sample as natural-log p-values; entries must be <= 0.
struct LogPValueVector {
    std::vector<double> logp;
    std::vector<std::string> ids;  // optional, empty or size p
};

// Per-element prior weights. pi is proportional to the prior probability of
// being an outlier, eta to the expected squared effect size; both strictly
// positive and finite. No normalization is applied: rescaling all eta by a
// common factor, or all pi by a common factor when eta is constant, leaves
// the transform unchanged.
struct PriorWeights {
    std::vector<double> pi;
    std::vector<double> eta;

    static PriorWeights neutral(std::size_t p) {
        return {std::vector<double>(p, 1.0), std::vector<double>(p, 1.0)};
    }
    bool empty() const { return pi.empty() && eta.empty(); }
};

struct TransformOptions {
    bool lenient = false;            // clamp log p = -inf instead of throwing
    double floor_logp = kDefaultLogFloor;
};

struct Scores {
    std::vector<double> z;     // eta_j * (-log U_j + log pi_j)
    std::vector<double> zeta;  // eta_j * log pi_j
    std::size_t clamped = 0;   // lenient-mode floor applications
};

struct TransformResult {
    std::vector<double> x;            // X_1..X_p, reverse-order interarrivals
    double total = 0.0;               // sum_j -log U_j
    std::vector<std::uint32_t> order; // rank (descending Z) -> original index
    std::size_t clamped = 0;
};

// Scores Z and zeta for the weighted point process.
Scores compute_scores(const LogPValueVector& input, const PriorWeights& w,
                      const TransformOptions& opts = {});

// Generalized Renyi transformation: time-change the score point process by
// its compensator and return the interarrival gaps in reverse order. Under
// the global null the result is i.i.d. Exp(1). O(p log p).
TransformResult renyi_transform(const LogPValueVector& input,
                                const PriorWeights& w,
                                const TransformOptions& opts = {});

// Classical unweighted Renyi map on an ascending vector of uniforms:
// scaled log-spacings of the order statistics. Reference implementation,
// independent of the sweep above.
std::vector<double> classical_renyi(const std::vector<double>& sorted_u);

}  // namespace rot
