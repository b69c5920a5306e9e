#include "rot/pipeline.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace rot {

TestReport run_rot_test(const LogPValueVector& input, const PriorWeights& weights,
                        int K, const TableSet& tables,
                        const TransformOptions& opts) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    const std::size_t p = input.logp.size();

    TestReport report;
    report.p = p;
    report.K = K;

    const LadderSpec spec = choose_kstar(K, p);
    report.kstar = spec.kstar;
    if (spec.clamped_to_p) {
        report.warnings.push_back("Kstar clamped to " + std::to_string(spec.kstar) +
                                  " (largest power of two <= p)");
    }

    const CalibrationTable* table = nullptr;
    if (spec.kstar > 1) {
        if (!tables.has(spec.kstar)) {
            throw MissingTableError(
                "no calibration table for Kstar = " + std::to_string(spec.kstar) +
                "; run `rot calibrate --kstar " + std::to_string(spec.kstar) +
                "` and pass the file via --tables");
        }
        table = &tables.at(spec.kstar);
    }

    const TransformResult tr = renyi_transform(input, weights, opts);
    if (tr.clamped > 0) {
        report.warnings.push_back(std::to_string(tr.clamped) +
                                  " zero p-value(s) clamped to the lenient floor");
    }

    const CollapsedTail tail = collapse_tail(tr, spec);
    if (tail.capped) {
        report.warnings.push_back("collapsed tail exponential capped at 745");
    }

    RotResult rr = rot_statistic(tail.xt, spec);
    report.rho = rr.rho;
    report.argmax_i = rr.argmax_i;
    for (std::size_t i = 0; i < spec.ladder.size(); ++i) {
        report.components.emplace_back(spec.ladder[i], rr.components[i]);
    }

    LogProb logp(0.0);
    bool extrapolated = false;
    if (table != nullptr) {
        std::tie(logp, extrapolated) = lookup_log_pvalue(rr.rho, *table);
    } else {
        logp = LogProb(-rr.rho);  // Kstar = 1: exp(-rho) is exactly the p-value
    }
    report.log10_pvalue = logp.log10();
    report.pvalue = logp.linear();
    report.extrapolated = extrapolated;
    return report;
}

std::string report_to_text(const TestReport& r) {
    std::ostringstream out;
    out.precision(10);
    out << "p:             " << r.p << "\n";
    out << "K:             " << r.K << "\n";
    out << "Kstar:         " << r.kstar << "\n";
    out << "rho:           " << r.rho << "\n";
    out << "components:";
    for (const auto& [i, v] : r.components) out << "  [" << i << "] " << v;
    out << "\n";
    out << "argmax_i:      " << r.argmax_i << "\n";
    out << "log10 p-value: " << r.log10_pvalue << "\n";
    out << "p-value:       " << r.pvalue << "\n";
    out << "extrapolated:  " << (r.extrapolated ? "yes" : "no") << "\n";
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    return out.str();
}

std::string report_to_json(const TestReport& r) {
    nlohmann::json components = nlohmann::json::object();
    for (const auto& [i, v] : r.components) components[std::to_string(i)] = v;
    const nlohmann::json j{
        {"p", r.p},
        {"K", r.K},
        {"Kstar", r.kstar},
        {"rho", r.rho},
        {"components", components},
        {"argmax_i", r.argmax_i},
        {"log10_pvalue", r.log10_pvalue},
        {"pvalue", r.pvalue},
        {"extrapolated", r.extrapolated},
        {"warnings", r.warnings},
    };
    return j.dump(2);
}

}  // namespace rot
