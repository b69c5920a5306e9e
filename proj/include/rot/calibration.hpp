#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rot/specfun.hpp"

namespace rot {

struct FitConfig {
    int body_knots = 64;         // quantile-placed spline knots
    double tail_fraction = 0.01; // top fraction of samples fit by the line
    int min_tail_points = 100;   // floor on the tail point count
};

struct SplineKnot {
    double rho = 0.0;
    double log_survival = 0.0;
    double m2 = 0.0;  // natural cubic second derivative
};

// Compressed null distribution of the statistic for one Kstar: cubic-spline
// body of the log-survival curve plus a log-linear tail.
struct CalibrationTable {
    int format_version = 1;
    int kstar = 1;
    std::uint64_t n_sims = 0;
    std::uint64_t seed = 0;
    double rho_max = 0.0;  // largest simulated statistic
    std::vector<SplineKnot> knots;
    double tail_cut = 0.0;
    double tail_slope = -1.0;
    double tail_intercept = 0.0;
};

struct TableSet {
    std::map<int, CalibrationTable> tables;

    bool has(int kstar) const { return tables.count(kstar) != 0; }
    const CalibrationTable& at(int kstar) const;
};

// n independent null replicates of the omnibus statistic for the given
// Kstar, drawn by sampling Kstar unit exponentials directly (the null law
// is free of p). Block-keyed streams make the output identical for any
// thread count.
std::vector<double> simulate_null(int kstar, std::uint64_t n, std::uint64_t seed,
                                  int threads = 1);

// Fit the compressed log-survival representation: empirical quantile knots
// through the body, least-squares line on the tail re-anchored for
// continuity at tail_cut, monotonicity enforced by re-knotting.
CalibrationTable fit_table(std::vector<double> samples, int kstar,
                           std::uint64_t seed, const FitConfig& config = {});

// Raw spline/tail evaluation, no Kstar=1 bypass. Exposed for validation.
double eval_table(const CalibrationTable& table, double rho);

// Log p-value for an observed statistic. Kstar = 1 bypasses the table
// (the null law is exactly Exp(1)); the flag reports extrapolation past
// the largest simulated value.
std::pair<LogProb, bool> lookup_log_pvalue(double rho, const CalibrationTable& table);

// Simulate and fit one table per requested Kstar (each a power of two).
TableSet calibrate_tables(const std::vector<int>& kstars, std::uint64_t n,
                          std::uint64_t seed, int threads = 1,
                          const FitConfig& config = {});

}  // namespace rot
