#include "rot/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "rot/rng.hpp"
#include "rot/statistic.hpp"

namespace rot {

namespace {

constexpr std::uint64_t kNullSalt = 0x524f544e554c4cull;  // stream domain tag
constexpr std::uint64_t kBlockSize = 8192;

bool is_pow2(int k) { return k >= 1 && (k & (k - 1)) == 0; }

// One replicate: Kstar fresh exponentials, max over the ladder of the
// negative log survival of the partial sums.
double simulate_one(Xoshiro256pp& rng, int kstar) {
    double rho = 0.0;
    double partial = 0.0;
    for (int i = 1; i <= kstar; ++i) {
        partial += rng.next_exp();
        if ((i & (i - 1)) == 0) {  // ladder entry (power of two)
            const double comp = -log_gamma_upper_reg(i, partial).value();
            if (comp > rho) rho = comp;
        }
    }
    return rho;
}

void run_blocks(std::vector<double>& out, int kstar, std::uint64_t n,
                std::uint64_t seed, int threads) {
    const std::uint64_t nblocks = (n + kBlockSize - 1) / kBlockSize;
    const std::uint64_t salt = hash_combine(kNullSalt, static_cast<std::uint64_t>(kstar));
    auto worker = [&](std::atomic<std::uint64_t>& next) {
        for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
            Xoshiro256pp rng = make_block_stream(seed, salt, b);
            const std::uint64_t lo = b * kBlockSize;
            const std::uint64_t hi = std::min(n, lo + kBlockSize);
            for (std::uint64_t i = lo; i < hi; ++i) out[i] = simulate_one(rng, kstar);
        }
    };
    if (threads <= 1 || nblocks == 1) {
        std::atomic<std::uint64_t> next{0};
        worker(next);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min<std::uint64_t>(threads, nblocks);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back([&] { worker(next); });
    for (auto& th : pool) th.join();
}

// Natural cubic spline second derivatives (Thomas algorithm).
std::vector<double> spline_m2(const std::vector<double>& x,
                              const std::vector<double>& y) {
    const std::size_t m = x.size();
    std::vector<double> m2(m, 0.0), u(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        const double pden = sig * m2[i - 1] + 2.0;
        m2[i] = (sig - 1.0) / pden;
        const double d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) -
                         (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / pden;
    }
    for (std::size_t i = m - 1; i-- > 1;) {
        m2[i] = m2[i] * m2[i + 1] + u[i];
    }
    return m2;
}

struct Cubic {
    double b, c, d;  // derivative coefficients on [0, h]
};

Cubic interval_coeffs(const SplineKnot& k0, const SplineKnot& k1) {
    const double h = k1.rho - k0.rho;
    Cubic cu;
    cu.b = (k1.log_survival - k0.log_survival) / h - h * (2.0 * k0.m2 + k1.m2) / 6.0;
    cu.c = k0.m2 / 2.0;
    cu.d = (k1.m2 - k0.m2) / (6.0 * h);
    return cu;
}

bool interval_nonincreasing(const SplineKnot& k0, const SplineKnot& k1) {
    const double h = k1.rho - k0.rho;
    const Cubic cu = interval_coeffs(k0, k1);
    auto deriv = [&](double t) { return cu.b + 2.0 * cu.c * t + 3.0 * cu.d * t * t; };
    if (deriv(0.0) > 0.0 || deriv(h) > 0.0) return false;
    if (cu.d != 0.0) {
        const double tc = -cu.c / (3.0 * cu.d);  // vertex of the quadratic
        if (tc > 0.0 && tc < h && deriv(tc) > 0.0) return false;
    }
    return true;
}

bool spline_nonincreasing(const std::vector<SplineKnot>& knots) {
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!interval_nonincreasing(knots[i], knots[i + 1])) return false;
    }
    return true;
}

// Quantile-placed knots over the body, deduplicated in rho.
std::vector<SplineKnot> body_knots(const std::vector<double>& sorted, int nknots,
                                   double body_max_q) {
    const std::size_t n = sorted.size();
    std::vector<SplineKnot> knots;
    knots.push_back({0.0, 0.0, 0.0});  // survival is exactly 1 at rho = 0
    for (int j = 1; j < nknots; ++j) {
        const double q = body_max_q * static_cast<double>(j) / (nknots - 1);
        std::size_t idx = static_cast<std::size_t>(std::ceil(q * n));
        idx = std::min(std::max<std::size_t>(idx, 1), n) - 1;
        const double rho = sorted[idx];
        const double y = std::log1p(-q);
        if (rho > knots.back().rho && y < knots.back().log_survival) {
            knots.push_back({rho, y, 0.0});
        }
    }
    return knots;
}

}  // namespace

const CalibrationTable& TableSet::at(int kstar) const {
    auto it = tables.find(kstar);
    if (it == tables.end()) {
        throw std::out_of_range("TableSet: no table for Kstar = " +
                                std::to_string(kstar));
    }
    return it->second;
}

std::vector<double> simulate_null(int kstar, std::uint64_t n, std::uint64_t seed,
                                  int threads) {
    if (!is_pow2(kstar)) {
        throw std::invalid_argument("simulate_null: Kstar must be a power of two");
    }
    if (n == 0) throw std::invalid_argument("simulate_null: n must be >= 1");
    std::vector<double> out(n);
    run_blocks(out, kstar, n, seed, threads);
    return out;
}

CalibrationTable fit_table(std::vector<double> samples, int kstar,
                           std::uint64_t seed, const FitConfig& config) {
    if (samples.empty()) throw std::invalid_argument("fit_table: no samples");
    if (!is_pow2(kstar)) {
        throw std::invalid_argument("fit_table: Kstar must be a power of two");
    }
    if (config.body_knots < 8 || config.tail_fraction <= 0.0 ||
        config.min_tail_points < 10) {
        throw std::invalid_argument("fit_table: invalid config");
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const std::size_t tail_count = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(config.tail_fraction * n)),
        config.min_tail_points);
    if (tail_count < static_cast<std::size_t>(config.min_tail_points) ||
        tail_count > n / 10) {
        throw std::runtime_error(
            "fit_table: too few samples for the configured tail region");
    }
    const double body_max_q = 1.0 - static_cast<double>(tail_count) / n;

    CalibrationTable table;
    table.kstar = kstar;
    table.n_sims = n;
    table.seed = seed;
    table.rho_max = samples.back();

    // Monotonicity by construction where possible, by re-knotting otherwise.
    static constexpr double kKnotFactors[] = {1.0, 0.75, 0.5, 0.375, 0.25};
    bool fitted = false;
    for (double f : kKnotFactors) {
        const int nk = std::max(8, static_cast<int>(std::lround(config.body_knots * f)));
        auto knots = body_knots(samples, nk, body_max_q);
        if (knots.size() < 4) continue;
        std::vector<double> xs(knots.size()), ys(knots.size());
        for (std::size_t i = 0; i < knots.size(); ++i) {
            xs[i] = knots[i].rho;
            ys[i] = knots[i].log_survival;
        }
        auto m2 = spline_m2(xs, ys);
        for (std::size_t i = 0; i < knots.size(); ++i) knots[i].m2 = m2[i];
        if (spline_nonincreasing(knots)) {
            table.knots = std::move(knots);
            fitted = true;
            break;
        }
    }
    if (!fitted) {
        throw std::runtime_error("fit_table: could not fit a monotone spline body");
    }
    table.tail_cut = table.knots.back().rho;

    // Weighted least-squares line over the empirical log-survival of the
    // top samples (the k-th largest has Var ~ 1/k, so weight by k), then
    // re-anchored so the tail joins the spline exactly at tail_cut.
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 1; k <= tail_count; ++k) {
        const double w = static_cast<double>(k);
        const double rho = samples[n - k];
        const double y = std::log((static_cast<double>(k) - 0.5) / n);
        sw += w;
        sx += w * rho;
        sy += w * y;
        sxx += w * rho * rho;
        sxy += w * rho * y;
    }
    const double denom = sw * sxx - sx * sx;
    if (denom <= 0.0) throw std::runtime_error("fit_table: degenerate tail");
    const double slope = (sw * sxy - sx * sy) / denom;
    if (!(slope < 0.0)) {
        throw std::runtime_error("fit_table: tail slope not negative");
    }
    table.tail_slope = slope;
    table.tail_intercept =
        table.knots.back().log_survival - slope * table.tail_cut;
    return table;
}

double eval_table(const CalibrationTable& table, double rho) {
    const auto& knots = table.knots;
    if (rho > table.tail_cut) {
        return std::min(table.tail_intercept + table.tail_slope * rho, 0.0);
    }
    if (rho <= knots.front().rho) return knots.front().log_survival;
    auto it = std::upper_bound(
        knots.begin(), knots.end(), rho,
        [](double v, const SplineKnot& k) { return v < k.rho; });
    if (it == knots.end()) --it;  // rho lands exactly on the last knot
    const SplineKnot& k1 = *it;
    const SplineKnot& k0 = *(it - 1);
    const double h = k1.rho - k0.rho;
    const double a = (k1.rho - rho) / h;
    const double b = (rho - k0.rho) / h;
    const double y = a * k0.log_survival + b * k1.log_survival +
                     ((a * a * a - a) * k0.m2 + (b * b * b - b) * k1.m2) *
                         (h * h) / 6.0;
    return std::min(y, 0.0);
}

std::pair<LogProb, bool> lookup_log_pvalue(double rho,
                                           const CalibrationTable& table) {
    if (std::isnan(rho) || rho < 0.0) {
        throw std::domain_error("lookup_log_pvalue: rho must be >= 0");
    }
    if (table.kstar == 1) return {LogProb(-rho), false};
    return {LogProb(eval_table(table, rho)), rho > table.rho_max};
}

TableSet calibrate_tables(const std::vector<int>& kstars, std::uint64_t n,
                          std::uint64_t seed, int threads,
                          const FitConfig& config) {
    TableSet ts;
    for (int k : kstars) {
        auto samples = simulate_null(k, n, seed, threads);
        ts.tables[k] = fit_table(std::move(samples), k, seed, config);
    }
    return ts;
}

}  // namespace rot
