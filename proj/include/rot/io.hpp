#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rot/transform.hpp"

namespace rot {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputRecord {
    std::string id;
    double logp = 0.0;
    double pi = 1.0;
    double eta = 1.0;
};

struct ParsedInput {
    std::vector<InputRecord> records;
    char delimiter = '\t';
    bool from_linear_p = false;  // file carried a `p` column, not `logp`
    bool has_pi = false;
    bool has_eta = false;

    LogPValueVector log_pvalues() const;
    PriorWeights weights() const;
};

// Delimited text with a required header row; tab or comma, sniffed from the
// header. Columns: id, exactly one of p / logp, optional pi and eta.
// p must lie in (0, 1] (a literal 0 becomes log p = -inf for the
// strict/lenient policy downstream); logp is natural log, <= 0.
ParsedInput read_input(std::istream& in);
ParsedInput read_input_file(const std::string& path);

// Canonical writer (always emits logp); re-parsing reproduces the records
// bit-exactly.
void write_input(std::ostream& out, const ParsedInput& input);

}  // namespace rot
