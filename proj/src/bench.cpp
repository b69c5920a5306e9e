#include "rot/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rot/pipeline.hpp"
#include "rot/rng.hpp"

namespace rot {

namespace {

constexpr std::uint64_t kBenchSalt = 0x524f5442454e4348ull;

void check(const BenchConfig& c) {
    if (c.p < 1) throw std::invalid_argument("power_bench: p must be >= 1");
    if (c.replicates < 1) {
        throw std::invalid_argument("power_bench: replicate count must be >= 1");
    }
    if (c.n_outliers > c.p) {
        throw std::invalid_argument("power_bench: more outliers than elements");
    }
    if (!(c.alpha > 0.0) || !(c.alpha < 1.0)) {
        throw std::invalid_argument("power_bench: alpha must lie in (0, 1)");
    }
    if (!(c.outlier_scale > 0.0) || c.outlier_scale > 1.0) {
        throw std::invalid_argument("power_bench: outlier scale must lie in (0, 1]");
    }
    if (c.methods.empty()) throw std::invalid_argument("power_bench: no methods");
    for (const auto& m : c.methods) {
        if (m.kind != MethodSpec::Kind::min_p && m.param < 1) {
            throw std::invalid_argument("power_bench: method parameter must be >= 1");
        }
    }
}

}  // namespace

std::string MethodSpec::name() const {
    switch (kind) {
        case Kind::rot:
            return "rot_K" + std::to_string(param);
        case Kind::fixed_k:
            return "fixed_k" + std::to_string(param);
        case Kind::min_p:
            return "min_p_bonferroni";
    }
    return "?";
}

std::vector<MethodSpec> parse_methods(const std::string& text) {
    std::vector<MethodSpec> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        const std::string head = item.substr(0, colon);
        MethodSpec m;
        if (head == "rot" || head == "fixed") {
            if (colon == std::string::npos) {
                throw std::invalid_argument("method '" + head + "' needs a parameter");
            }
            m.kind = head == "rot" ? MethodSpec::Kind::rot : MethodSpec::Kind::fixed_k;
            m.param = std::stoi(item.substr(colon + 1));
        } else if (head == "minp" || head == "bonferroni") {
            m.kind = MethodSpec::Kind::min_p;
        } else {
            throw std::invalid_argument("unknown method '" + head + "'");
        }
        out.push_back(m);
    }
    return out;
}

std::vector<BenchRow> run_power_bench(const BenchConfig& config,
                                      const TableSet& tables) {
    check(config);
    const double log_alpha = std::log(config.alpha);
    const std::size_t nmethods = config.methods.size();

    // Resolve every ladder and table up front so a missing table fails fast.
    std::vector<LadderSpec> specs(nmethods);
    for (std::size_t m = 0; m < nmethods; ++m) {
        const auto& method = config.methods[m];
        if (method.kind == MethodSpec::Kind::rot) {
            specs[m] = choose_kstar(method.param, config.p);
            if (specs[m].kstar > 1) (void)tables.at(specs[m].kstar);
        }
        if (method.kind == MethodSpec::Kind::fixed_k &&
            static_cast<std::size_t>(method.param) > config.p) {
            throw std::invalid_argument("power_bench: fixed k exceeds p");
        }
    }

    std::vector<std::atomic<std::size_t>> rejections(nmethods);
    for (auto& r : rejections) r.store(0);

    auto run_replicate = [&](std::uint64_t rep) {
        Xoshiro256pp rng = make_block_stream(config.seed, kBenchSalt, rep);
        LogPValueVector input;
        input.logp.resize(config.p);
        const double log_scale = std::log(config.outlier_scale);
        for (std::size_t j = 0; j < config.p; ++j) {
            double lp = std::log(rng.next_unit());
            if (j < config.n_outliers) lp += log_scale;
            input.logp[j] = lp;
        }
        const PriorWeights w = PriorWeights::neutral(config.p);
        const TransformResult tr = renyi_transform(input, w);
        for (std::size_t m = 0; m < nmethods; ++m) {
            const auto& method = config.methods[m];
            double lpv = 0.0;
            switch (method.kind) {
                case MethodSpec::Kind::rot: {
                    const auto tail = collapse_tail(tr, specs[m]);
                    const auto rr = rot_statistic(tail.xt, specs[m]);
                    lpv = specs[m].kstar == 1
                              ? -rr.rho
                              : lookup_log_pvalue(rr.rho, tables.at(specs[m].kstar))
                                    .first.value();
                    break;
                }
                case MethodSpec::Kind::fixed_k:
                    lpv = fixed_k_test(tr, method.param).value();
                    break;
                case MethodSpec::Kind::min_p: {
                    const double min_lp =
                        *std::min_element(input.logp.begin(), input.logp.end());
                    // Bonferroni: p_min * p, compared in log space.
                    lpv = std::min(min_lp + std::log(static_cast<double>(config.p)),
                                   0.0);
                    break;
                }
            }
            if (lpv <= log_alpha) rejections[m].fetch_add(1);
        }
    };

    if (config.threads <= 1) {
        for (std::uint64_t rep = 0; rep < config.replicates; ++rep) run_replicate(rep);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (std::uint64_t rep = next.fetch_add(1); rep < config.replicates;
                 rep = next.fetch_add(1)) {
                run_replicate(rep);
            }
        };
        std::vector<std::thread> pool;
        const int nthreads =
            static_cast<int>(std::min<std::uint64_t>(config.threads, config.replicates));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<BenchRow> rows;
    rows.reserve(nmethods);
    for (std::size_t m = 0; m < nmethods; ++m) {
        BenchRow row;
        row.method = config.methods[m].name();
        row.rejections = rejections[m].load();
        row.replicates = config.replicates;
        row.rate = static_cast<double>(row.rejections) / config.replicates;
        row.std_error = std::sqrt(row.rate * (1.0 - row.rate) / config.replicates);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const BenchConfig& config,
                     const std::vector<BenchRow>& rows) {
    out << "method,p,n_outliers,outlier_scale,alpha,replicates,rejections,rate,std_error\n";
    for (const auto& r : rows) {
        out << r.method << ',' << config.p << ',' << config.n_outliers << ','
            << config.outlier_scale << ',' << config.alpha << ',' << r.replicates
            << ',' << r.rejections << ',' << r.rate << ',' << r.std_error << "\n";
    }
}

}  // namespace rot
