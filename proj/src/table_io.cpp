#include "rot/table_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "rot/embedded_tables.hpp"

namespace rot {

namespace {

// Shortest decimal that parses back to the identical double.
std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string num(std::uint64_t v) { return std::to_string(v); }

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string next_line() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        fail("unexpected end of file");
    }

    // "key v1 v2 ..." -> values
    std::vector<double> record(const std::string& key, std::size_t count) {
        std::istringstream ss(next_line());
        std::string k;
        ss >> k;
        if (k != key) fail("expected record '" + key + "', got '" + k + "'");
        std::vector<double> vals(count);
        for (auto& v : vals) {
            std::string tok;
            if (!(ss >> tok)) fail("truncated record '" + key + "'");
            v = parse_double(tok);
        }
        std::string extra;
        if (ss >> extra) fail("trailing data in record '" + key + "'");
        return vals;
    }

    double parse_double(const std::string& tok) {
        double v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
            fail("malformed number '" + tok + "'");
        }
        return v;
    }

    // full 64-bit integer record (doubles would corrupt values >= 2^53)
    std::uint64_t record_u64(const std::string& key) {
        std::istringstream ss(next_line());
        std::string k, tok, extra;
        if (!(ss >> k >> tok) || k != key || (ss >> extra)) {
            fail("expected integer record '" + key + "'");
        }
        std::uint64_t v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
            fail("malformed integer '" + tok + "'");
        }
        return v;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw TableIoError("ROTTAB line " + std::to_string(lineno_) + ": " + what);
    }

    bool at_end() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line != "\r") return false;
        }
        return true;
    }

private:
    std::istream& in_;
    std::size_t lineno_ = 0;
};

void validate(Reader& r, const CalibrationTable& t) {
    if (t.kstar < 1 || (t.kstar & (t.kstar - 1)) != 0) {
        r.fail("kstar is not a power of two");
    }
    if (t.knots.size() < 2) r.fail("fewer than two knots");
    for (std::size_t i = 0; i < t.knots.size(); ++i) {
        if (t.knots[i].log_survival > 0.0) r.fail("positive log-survival knot");
        if (i > 0 && !(t.knots[i].rho > t.knots[i - 1].rho)) {
            r.fail("knots not strictly ascending");
        }
    }
    if (!(t.tail_slope < 0.0)) r.fail("tail slope must be negative");
    if (t.tail_cut != t.knots.back().rho) r.fail("tail_cut does not match last knot");
    if (!(t.rho_max >= t.tail_cut)) r.fail("rho_max below tail_cut");
    const double joint = t.tail_intercept + t.tail_slope * t.tail_cut;
    const double y = t.knots.back().log_survival;
    if (std::abs(joint - y) > 1e-9 * std::max(1.0, std::abs(y))) {
        r.fail("tail line discontinuous at tail_cut");
    }
    // Re-check body monotonicity from the stored coefficients.
    CalibrationTable probe = t;
    double prev = eval_table(probe, 0.0);
    for (int g = 1; g <= 1000; ++g) {
        const double rho = t.tail_cut * g / 1000.0;
        const double v = eval_table(probe, rho);
        if (v > prev + 1e-12) r.fail("non-monotone spline body");
        prev = v;
    }
}

CalibrationTable read_table(Reader& r) {
    CalibrationTable t;
    const std::uint64_t kstar = r.record_u64("kstar");
    if (kstar == 0 || kstar > (1u << 30)) r.fail("kstar out of range");
    t.kstar = static_cast<int>(kstar);
    t.n_sims = r.record_u64("n_sims");
    t.seed = r.record_u64("seed");
    t.rho_max = r.record("rho_max", 1)[0];
    const std::uint64_t nknots = r.record_u64("knots");
    if (nknots > 100000) r.fail("implausible knot count");
    t.knots.resize(nknots);
    for (auto& k : t.knots) {
        std::istringstream ss(r.next_line());
        std::string t0, t1, t2, extra;
        if (!(ss >> t0 >> t1 >> t2) || (ss >> extra)) r.fail("malformed knot");
        k.rho = r.parse_double(t0);
        k.log_survival = r.parse_double(t1);
        k.m2 = r.parse_double(t2);
    }
    t.tail_cut = r.record("tail_cut", 1)[0];
    t.tail_slope = r.record("tail_slope", 1)[0];
    t.tail_intercept = r.record("tail_intercept", 1)[0];
    if (r.next_line() != "end") r.fail("missing section terminator");
    validate(r, t);
    return t;
}

}  // namespace

void save_table_set(const TableSet& ts, std::ostream& out) {
    out << "ROTTAB v1\n";
    out << "tables " << ts.tables.size() << "\n";
    for (const auto& [kstar, t] : ts.tables) {
        out << "kstar " << kstar << "\n";
        out << "n_sims " << num(t.n_sims) << "\n";
        out << "seed " << num(t.seed) << "\n";
        out << "rho_max " << num(t.rho_max) << "\n";
        out << "knots " << t.knots.size() << "\n";
        for (const auto& k : t.knots) {
            out << num(k.rho) << ' ' << num(k.log_survival) << ' ' << num(k.m2)
                << "\n";
        }
        out << "tail_cut " << num(t.tail_cut) << "\n";
        out << "tail_slope " << num(t.tail_slope) << "\n";
        out << "tail_intercept " << num(t.tail_intercept) << "\n";
        out << "end\n";
    }
}

void save_table_set(const TableSet& ts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TableIoError("cannot open for writing: " + path);
    save_table_set(ts, out);
    out.flush();
    if (!out) throw TableIoError("write failed: " + path);
}

TableSet load_table_set(std::istream& in) {
    Reader r(in);
    if (r.next_line() != "ROTTAB v1") {
        r.fail("unsupported format or version (expected 'ROTTAB v1')");
    }
    std::istringstream hs(r.next_line());
    std::string key;
    std::size_t count = 0;
    if (!(hs >> key >> count) || key != "tables") r.fail("missing table count");
    TableSet ts;
    for (std::size_t i = 0; i < count; ++i) {
        CalibrationTable t = read_table(r);
        if (ts.tables.count(t.kstar)) r.fail("duplicate kstar section");
        ts.tables[t.kstar] = std::move(t);
    }
    if (!r.at_end()) r.fail("trailing data after last section");
    return ts;
}

TableSet load_table_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableIoError("cannot open: " + path);
    return load_table_set(in);
}

const TableSet& default_table_set() {
    static const TableSet ts = [] {
        std::istringstream in(embedded_tables_text());
        return load_table_set(in);
    }();
    return ts;
}

}  // namespace rot
