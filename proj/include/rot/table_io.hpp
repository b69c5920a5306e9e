#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rot/calibration.hpp"

namespace rot {

struct TableIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain-text ROTTAB v1 format: versioned header, then one section per
// Kstar (kstar, n_sims, seed, rho_max, knot list, tail_cut, tail_slope,
// tail_intercept). Numbers are shortest-round-trip decimal, so
// save -> load -> save is byte-identical.
void save_table_set(const TableSet& ts, std::ostream& out);
void save_table_set(const TableSet& ts, const std::string& path);

// Loading validates the format version and every table invariant
// (ascending knots, monotone spline, negative tail slope, continuity at
// tail_cut).
TableSet load_table_set(std::istream& in);
TableSet load_table_set(const std::string& path);

// Tables shipped inside the library (Kstar = 1..128), parsed once.
const TableSet& default_table_set();

}  // namespace rot
