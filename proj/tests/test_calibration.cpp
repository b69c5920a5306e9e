#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "rot/calibration.hpp"
#include "rot/table_io.hpp"
#include "support.hpp"

using rot::calibrate_tables;
using rot::CalibrationTable;
using rot::eval_table;
using rot::fit_table;
using rot::lookup_log_pvalue;
using rot::simulate_null;
using rot::TableSet;

namespace {

std::string serialized(const TableSet& ts) {
    std::ostringstream out;
    rot::save_table_set(ts, out);
    return out.str();
}

}  // namespace

TEST_CASE("simulate_null determinism and distribution") {
    const auto a = simulate_null(4, 20000, 99, 1);
    const auto b = simulate_null(4, 20000, 99, 2);
    CHECK(a == b);  // thread count never changes results
    const auto c = simulate_null(4, 20000, 100, 1);
    CHECK(a != c);

    // Kstar = 1 draws are plain unit exponentials
    const auto ones = simulate_null(1, 1000000, 31, 2);
    double mean = 0.0;
    for (double v : ones) mean += v;
    mean /= static_cast<double>(ones.size());
    CHECK(std::abs(mean - 1.0) < 0.005);

    CHECK_THROWS_AS((void)simulate_null(1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_null(3, 10, 1), std::invalid_argument);
}

TEST_CASE("fit recovers the exact Exp(1) law for Kstar = 1") {
    const auto samples = simulate_null(1, 1000000, 7, 2);
    const auto table = fit_table(samples, 1, 7);
    CHECK(table.tail_slope > -1.05);
    CHECK(table.tail_slope < -0.95);
    for (double rho = 0.1; rho <= 5.0; rho += 0.07) {
        CHECK(std::abs(eval_table(table, rho) - (-rho)) < 0.02);
    }
}

TEST_CASE("fit invariants: continuity, monotonicity, knot interpolation") {
    const auto samples = simulate_null(8, 200000, 21, 2);
    const auto table = fit_table(samples, 8, 21);

    // the tail line is re-anchored to meet the spline at tail_cut
    const double at_cut = table.tail_intercept + table.tail_slope * table.tail_cut;
    CHECK(at_cut == doctest::Approx(table.knots.back().log_survival).epsilon(1e-12));

    double prev = 1.0;
    for (int g = 0; g <= 1000; ++g) {
        const double rho = 2.0 * table.rho_max * g / 1000.0;
        const double v = eval_table(table, rho);
        CHECK(v <= prev + 1e-12);
        CHECK(v <= 0.0);
        prev = v;
    }

    for (const auto& k : table.knots) {
        CHECK(std::abs(eval_table(table, k.rho) - k.log_survival) < 1e-9);
    }

    CHECK_THROWS_AS((void)fit_table(std::vector<double>(500, 1.0), 8, 1),
                    std::runtime_error);  // too few samples for the tail
    CHECK_THROWS_AS((void)fit_table({}, 8, 1), std::invalid_argument);
}

TEST_CASE("fit is deterministic") {
    const auto samples = simulate_null(2, 50000, 5, 2);
    TableSet a, b;
    a.tables[2] = fit_table(samples, 2, 5);
    b.tables[2] = fit_table(samples, 2, 5);
    CHECK(serialized(a) == serialized(b));
}

TEST_CASE("lookup semantics") {
    const auto table = fit_table(simulate_null(4, 100000, 3, 2), 4, 3);

    auto [lp0, ex0] = lookup_log_pvalue(0.0, table);
    CHECK(lp0.value() == 0.0);
    CHECK_FALSE(ex0);

    auto [lp_far, ex_far] = lookup_log_pvalue(table.rho_max + 5.0, table);
    CHECK(ex_far);
    CHECK(lp_far.value() < eval_table(table, table.tail_cut));

    CHECK_THROWS_AS((void)lookup_log_pvalue(-0.1, table), std::domain_error);

    // Kstar = 1 bypasses the table entirely
    const auto k1 = fit_table(simulate_null(1, 100000, 3, 2), 1, 3);
    auto [lp3, ex3] = lookup_log_pvalue(3.0, k1);
    CHECK(lp3.value() == -3.0);
    CHECK_FALSE(ex3);
}

TEST_CASE("Kstar = 1 analytic bypass agrees with its own table") {
    const auto table = fit_table(simulate_null(1, 1000000, 17, 2), 1, 17);
    // compare on p-values >= 1e-4, i.e. rho <= log(1e4)
    for (double rho = 0.05; rho <= 9.2; rho += 0.05) {
        const double exact = -rho;
        const double fitted = eval_table(table, rho);
        CHECK(std::abs(std::expm1(fitted - exact)) < 0.10);
    }
}

TEST_CASE("fresh null replicates map to uniform p-values through the table") {
    for (int kstar : {2, 8, 64}) {
        const auto table = fit_table(simulate_null(kstar, 300000, 1234, 2), kstar, 1234);
        const auto fresh = simulate_null(kstar, 30000, 4321, 2);
        std::vector<double> pvals;
        pvals.reserve(fresh.size());
        for (double rho : fresh) {
            pvals.push_back(std::exp(lookup_log_pvalue(rho, table).first.value()));
        }
        const double d = rot_test::ks_distance(pvals, rot_test::uniform_cdf);
        CHECK(d < rot_test::ks_critical(0.01, pvals.size()));
    }
}

TEST_CASE("table set round-trips byte-exactly") {
    const auto ts = calibrate_tables({1, 2, 4}, 50000, 11, 2);
    const std::string first = serialized(ts);
    std::istringstream in(first);
    const TableSet loaded = rot::load_table_set(in);
    CHECK(serialized(loaded) == first);
    CHECK(loaded.at(2).n_sims == 50000);
    CHECK(loaded.at(4).seed == 11);
}

TEST_CASE("loader rejects malformed and invalid files") {
    const auto ts = calibrate_tables({2}, 20000, 1, 2);
    const std::string good = serialized(ts);

    {
        std::istringstream in(good.substr(0, good.size() / 2));
        CHECK_THROWS_AS((void)rot::load_table_set(in), rot::TableIoError);
    }
    {
        std::istringstream in("ROTTAB v2\ntables 0\n");
        CHECK_THROWS_AS((void)rot::load_table_set(in), rot::TableIoError);
    }
    {
        std::string bad = good;
        const auto pos = bad.find("tail_slope -");
        bad.replace(pos, 12, "tail_slope 0");
        std::istringstream in(bad);
        CHECK_THROWS_AS((void)rot::load_table_set(in), rot::TableIoError);
    }
    {
        // force a rising knot: swap the first two knot payloads
        TableSet mutated = ts;
        auto& knots = mutated.tables.at(2).knots;
        std::swap(knots[0].log_survival, knots[1].log_survival);
        std::istringstream in(serialized(mutated));
        CHECK_THROWS_AS((void)rot::load_table_set(in), rot::TableIoError);
    }
}
