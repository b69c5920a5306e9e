#include "rot/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rot/compensated_sum.hpp"

namespace rot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& what) {
    throw std::domain_error("renyi_transform: " + what);
}

double effective_logp(double lp, const TransformOptions& opts, std::size_t j,
                      std::size_t* clamped) {
    if (std::isnan(lp) || lp > 0.0) {
        fail("log p-value at index " + std::to_string(j) + " must be <= 0");
    }
    if (lp == -kInf) {
        if (!opts.lenient) {
            fail("p-value of exactly 0 at index " + std::to_string(j) +
                 " (strict mode)");
        }
        ++*clamped;
        return opts.floor_logp;
    }
    return lp;
}

}  // namespace

Scores compute_scores(const LogPValueVector& input, const PriorWeights& w,
                      const TransformOptions& opts) {
    const std::size_t p = input.logp.size();
    if (p == 0) fail("empty input");
    if (w.pi.size() != p || w.eta.size() != p) {
        fail("weight length does not match input length");
    }
    Scores s;
    s.z.resize(p);
    s.zeta.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double pi = w.pi[j];
        const double eta = w.eta[j];
        if (!(pi > 0.0) || !std::isfinite(pi) || !(eta > 0.0) || !std::isfinite(eta)) {
            fail("weights must be finite and > 0 (index " + std::to_string(j) + ")");
        }
        const double lp = effective_logp(input.logp[j], opts, j, &s.clamped);
        const double zeta = eta * std::log(pi);
        const double z = eta * (-lp + std::log(pi));
        if (!std::isfinite(z) || !std::isfinite(zeta)) {
            fail("non-finite score at index " + std::to_string(j));
        }
        s.z[j] = z;
        s.zeta[j] = zeta;
    }
    return s;
}

TransformResult renyi_transform(const LogPValueVector& input,
                                const PriorWeights& w,
                                const TransformOptions& opts) {
    const PriorWeights& weights =
        w.empty() ? PriorWeights::neutral(input.logp.size()) : w;
    Scores s = compute_scores(input, weights, opts);
    const std::size_t p = s.z.size();

    // Event streams of the compensator sweep. The compensator is piecewise
    // linear: element j contributes slope 1/eta_j on [zeta_j, Z_j). Sorting
    // activations and deactivations separately and merging keeps the event
    // ordering rule explicit: at equal abscissae, activations first, Z ties
    // by original index.
    struct Event {
        double t;
        std::uint32_t idx;
        bool operator<(const Event& o) const {
            return t < o.t || (t == o.t && idx < o.idx);
        }
    };
    std::vector<Event> act(p), deact(p);
    for (std::size_t j = 0; j < p; ++j) {
        act[j] = {s.zeta[j], static_cast<std::uint32_t>(j)};
        deact[j] = {s.z[j], static_cast<std::uint32_t>(j)};
    }
    std::sort(act.begin(), act.end());
    std::sort(deact.begin(), deact.end());

    TransformResult res;
    res.clamped = s.clamped;
    res.x.resize(p);
    res.order.resize(p);

    // Each interarrival gap is accumulated slope-by-segment between
    // consecutive order statistics of Z, never by differencing the
    // cumulative compensator (one enormous Z must not wipe out the gaps).
    CompensatedSum slope;
    CompensatedSum gap;
    double t_prev = act.front().t;
    std::size_t ia = 0;
    for (std::size_t iz = 0; iz < p;) {
        const bool take_act = ia < p && act[ia].t <= deact[iz].t;
        const double t = take_act ? act[ia].t : deact[iz].t;
        if (t > t_prev) {
            gap.add(slope.value() * (t - t_prev));
            t_prev = t;
        }
        if (take_act) {
            slope.add(1.0 / weights.eta[act[ia].idx]);
            ++ia;
        } else {
            slope.add(-1.0 / weights.eta[deact[iz].idx]);
            // iz-th transformed event time (ascending); reverse-order index.
            res.x[p - 1 - iz] = std::max(gap.value(), 0.0);
            gap.reset();
            res.order[p - 1 - iz] = deact[iz].idx;
            ++iz;
        }
    }

    CompensatedSum total;
    for (std::size_t j = 0; j < p; ++j) {
        const double lp = input.logp[j];
        total.add(lp == -kInf ? -opts.floor_logp : -lp);
    }
    res.total = total.value();
    return res;
}

std::vector<double> classical_renyi(const std::vector<double>& sorted_u) {
    const std::size_t p = sorted_u.size();
    if (p == 0) throw std::domain_error("classical_renyi: empty input");
    for (std::size_t j = 0; j < p; ++j) {
        const double u = sorted_u[j];
        if (!(u > 0.0) || u > 1.0) {
            throw std::domain_error("classical_renyi: values must lie in (0, 1]");
        }
        if (j > 0 && u < sorted_u[j - 1]) {
            throw std::domain_error("classical_renyi: input not sorted ascending");
        }
    }
    std::vector<double> x(p);
    for (std::size_t j = 0; j + 1 < p; ++j) {
        x[j] = (j + 1) * std::log(sorted_u[j + 1] / sorted_u[j]);
    }
    x[p - 1] = -static_cast<double>(p) * std::log(sorted_u[p - 1]);
    return x;
}

}  // namespace rot
