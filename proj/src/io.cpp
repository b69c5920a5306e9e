#include "rot/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
    throw ParseError("input line " + std::to_string(lineno) + ": " + what);
}

double parse_double(const std::string& raw, std::size_t lineno, const char* col) {
    const std::string tok = trim(raw);
    const std::string low = lower(tok);
    if (low == "-inf" || low == "-infinity") return -kInf;
    if (low == "inf" || low == "+inf" || low == "infinity") return kInf;
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ptr == tok.data() + tok.size() && res.ec == std::errc{}) return v;
    if (res.ec == std::errc::result_out_of_range &&
        res.ptr == tok.data() + tok.size()) {
        // e.g. logp = -1e999; sign decides the clamp direction
        return tok.front() == '-' ? -kInf : kInf;
    }
    fail(lineno, std::string("malformed number in column '") + col + "': '" + tok + "'");
}

std::string num(double v) {
    if (v == -kInf) return "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

LogPValueVector ParsedInput::log_pvalues() const {
    LogPValueVector v;
    v.logp.reserve(records.size());
    v.ids.reserve(records.size());
    for (const auto& r : records) {
        v.logp.push_back(r.logp);
        v.ids.push_back(r.id);
    }
    return v;
}

PriorWeights ParsedInput::weights() const {
    PriorWeights w;
    w.pi.reserve(records.size());
    w.eta.reserve(records.size());
    for (const auto& r : records) {
        w.pi.push_back(r.pi);
        w.eta.push_back(r.eta);
    }
    return w;
}

ParsedInput read_input(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty input: missing header row");
    if (!header.empty() && header.back() == '\r') header.pop_back();

    ParsedInput out;
    out.delimiter = header.find('\t') != std::string::npos ? '\t' : ',';

    int col_id = -1, col_p = -1, col_logp = -1, col_pi = -1, col_eta = -1;
    const auto names = split(header, out.delimiter);
    for (std::size_t c = 0; c < names.size(); ++c) {
        const std::string name = lower(trim(names[c]));
        int* slot = nullptr;
        if (name == "id") slot = &col_id;
        else if (name == "p") slot = &col_p;
        else if (name == "logp") slot = &col_logp;
        else if (name == "pi") slot = &col_pi;
        else if (name == "eta") slot = &col_eta;
        else fail(1, "unknown column '" + name + "'");
        if (*slot != -1) fail(1, "duplicate column '" + name + "'");
        *slot = static_cast<int>(c);
    }
    if (col_id < 0) fail(1, "missing required column 'id'");
    if ((col_p < 0) == (col_logp < 0)) {
        fail(1, "need exactly one of columns 'p' and 'logp'");
    }
    out.from_linear_p = col_p >= 0;
    out.has_pi = col_pi >= 0;
    out.has_eta = col_eta >= 0;

    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, out.delimiter);
        if (fields.size() != names.size()) {
            fail(lineno, "expected " + std::to_string(names.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        InputRecord rec;
        rec.id = trim(fields[col_id]);
        if (rec.id.empty()) fail(lineno, "empty id");
        if (out.from_linear_p) {
            const double p = parse_double(fields[col_p], lineno, "p");
            if (std::isnan(p) || p < 0.0 || p > 1.0) {
                fail(lineno, "p-value out of (0, 1]: " + trim(fields[col_p]));
            }
            rec.logp = std::log(p);  // p == 0 -> -inf, policed downstream
        } else {
            const double lp = parse_double(fields[col_logp], lineno, "logp");
            if (std::isnan(lp) || lp > 0.0) {
                fail(lineno, "logp must be <= 0: " + trim(fields[col_logp]));
            }
            rec.logp = lp;
        }
        if (out.has_pi) {
            rec.pi = parse_double(fields[col_pi], lineno, "pi");
            if (!(rec.pi > 0.0) || !std::isfinite(rec.pi)) {
                fail(lineno, "pi must be finite and > 0");
            }
        }
        if (out.has_eta) {
            rec.eta = parse_double(fields[col_eta], lineno, "eta");
            if (!(rec.eta > 0.0) || !std::isfinite(rec.eta)) {
                fail(lineno, "eta must be finite and > 0");
            }
        }
        out.records.push_back(std::move(rec));
    }
    if (out.records.empty()) throw ParseError("input has a header but no rows");
    return out;
}

ParsedInput read_input_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    return read_input(in);
}

void write_input(std::ostream& out, const ParsedInput& input) {
    const char d = input.delimiter;
    out << "id" << d << "logp";
    if (input.has_pi) out << d << "pi";
    if (input.has_eta) out << d << "eta";
    out << "\n";
    for (const auto& r : input.records) {
        out << r.id << d << num(r.logp);
        if (input.has_pi) out << d << num(r.pi);
        if (input.has_eta) out << d << num(r.eta);
        out << "\n";
    }
}

}  // namespace rot
