#pragma once

#include <vector>

#include "rot/specfun.hpp"
#include "rot/transform.hpp"

namespace rot {

// Cap applied when the collapsed tail exponential's survival underflows in
// log space; exceeds any calibratable statistic.
inline constexpr double kCollapseCap = 745.0;

// Ladder of candidate outlier counts (1, 2, 4, ..., Kstar).
struct LadderSpec {
    int K = 1;
    int kstar = 1;
    std::vector<int> ladder;
    bool clamped_to_p = false;  // 2^ceil(log2 K) exceeded p
};

struct CollapsedTail {
    std::vector<double> xt;  // Xt_1..Xt_Kstar
    bool capped = false;
};

struct RotResult {
    double rho = 0.0;
    std::vector<double> components;  // aligned with LadderSpec::ladder
    int argmax_i = 1;                // ladder value attaining rho
    double log_pvalue = 0.0;         // filled by lookup
    bool has_pvalue = false;
    bool extrapolated = false;
};

// Round the outlier bound K up to a power of two, clamped down to the
// largest power of two <= p when that overshoots.
LadderSpec choose_kstar(int K, std::size_t p);

// Keep X_1..X_{Kstar-1}; replace the tail by one equivalent exponential
// built from the Kstar-th largest order statistic through the Beta survival,
// evaluated in log space.
CollapsedTail collapse_tail(const TransformResult& tr, const LadderSpec& spec);

// Omnibus statistic: max over the ladder of the negative log survival of
// the partial sums under their null Gamma laws. Ties resolve to the
// smallest ladder entry. The p-value field is left unfilled.
RotResult rot_statistic(const std::vector<double>& xt, const LadderSpec& spec);

// Fixed-k baseline: log p-value of sum of the top-k interarrivals against
// Gamma(k, 1).
LogProb fixed_k_test(const TransformResult& tr, int k);

}  // namespace rot
