#include "rot/statistic.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rot/compensated_sum.hpp"

namespace rot {

LadderSpec choose_kstar(int K, std::size_t p) {
    if (K < 1) throw std::invalid_argument("choose_kstar: K must be >= 1");
    if (K > (1 << 30)) throw std::invalid_argument("choose_kstar: K too large");
    if (p < 1) throw std::invalid_argument("choose_kstar: p must be >= 1");
    LadderSpec spec;
    spec.K = K;
    auto kstar = std::bit_ceil(static_cast<unsigned>(K));
    if (kstar > p) {
        kstar = std::bit_floor(static_cast<unsigned>(std::min<std::size_t>(p, 1u << 30)));
        spec.clamped_to_p = true;
    }
    spec.kstar = static_cast<int>(kstar);
    for (int i = 1; i <= spec.kstar; i *= 2) spec.ladder.push_back(i);
    return spec;
}

CollapsedTail collapse_tail(const TransformResult& tr, const LadderSpec& spec) {
    const std::size_t p = tr.x.size();
    const std::size_t kstar = static_cast<std::size_t>(spec.kstar);
    if (kstar < 1 || kstar > p) {
        throw std::invalid_argument("collapse_tail: Kstar must lie in [1, p]");
    }
    CollapsedTail out;
    out.xt.assign(tr.x.begin(), tr.x.begin() + kstar);

    // S = sum_{j=Kstar}^{p} X_j / j is the Kstar-th largest of p unit
    // exponentials under the null; small terms first.
    CompensatedSum s;
    for (std::size_t j = p; j >= kstar; --j) {
        s.add(tr.x[j - 1] / static_cast<double>(j));
    }
    const double log_surv =
        log_beta_upper_reg_logx(static_cast<double>(kstar),
                                static_cast<double>(p - kstar + 1), -s.value())
            .value();
    double collapsed = -log_surv;
    if (!(collapsed <= kCollapseCap)) {
        collapsed = kCollapseCap;
        out.capped = true;
    }
    out.xt[kstar - 1] = collapsed;
    return out;
}

RotResult rot_statistic(const std::vector<double>& xt, const LadderSpec& spec) {
    if (xt.size() != static_cast<std::size_t>(spec.kstar)) {
        throw std::invalid_argument("rot_statistic: need exactly Kstar values");
    }
    RotResult res;
    res.components.reserve(spec.ladder.size());
    res.rho = -1.0;
    double partial = 0.0;
    std::size_t next = 0;
    for (int i = 1; i <= spec.kstar; ++i) {
        partial += xt[i - 1];
        if (!std::isfinite(partial)) {
            throw std::domain_error("rot_statistic: non-finite partial sum");
        }
        if (i == spec.ladder[next]) {
            const double comp = -log_gamma_upper_reg(i, partial).value();
            res.components.push_back(comp);
            if (comp > res.rho) {
                res.rho = comp;
                res.argmax_i = i;
            }
            ++next;
        }
    }
    return res;
}

LogProb fixed_k_test(const TransformResult& tr, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > tr.x.size()) {
        throw std::invalid_argument("fixed_k_test: k must lie in [1, p]");
    }
    CompensatedSum s;
    for (int j = 0; j < k; ++j) s.add(tr.x[j]);
    return log_gamma_upper_reg(k, s.value());
}

}  // namespace rot
