#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rot/bench.hpp"
#include "rot/io.hpp"
#include "rot/pipeline.hpp"
#include "rot/table_io.hpp"

namespace {

// Exit codes: 0 ok, 1 unexpected, 2 parse error, 3 invalid K / missing
// table, 4 numeric domain error.
constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitDomain = 4;

const rot::TableSet& resolve_tables(const std::string& path, rot::TableSet& storage) {
    if (path.empty()) return rot::default_table_set();
    storage = rot::load_table_set(path);
    return storage;
}

std::vector<int> parse_kstar_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto dash = item.find("..");
        if (dash != std::string::npos) {
            const int lo = std::stoi(item.substr(0, dash));
            const int hi = std::stoi(item.substr(dash + 2));
            if (lo < 1) throw std::invalid_argument("Kstar range must start at >= 1");
            for (int k = lo; k <= hi; k *= 2) out.push_back(k);
        } else {
            out.push_back(std::stoi(item));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int cmd_test(const std::string& input_path, int K, const std::string& tables_path,
             bool lenient, bool json) {
    if (K < 1) {
        std::cerr << "rot test: K must be >= 1\n";
        return kExitInvalid;
    }
    const rot::ParsedInput parsed = rot::read_input_file(input_path);
    rot::TableSet storage;
    const rot::TableSet& tables = resolve_tables(tables_path, storage);
    rot::TransformOptions opts;
    opts.lenient = lenient;
    const rot::TestReport report = rot::run_rot_test(
        parsed.log_pvalues(), parsed.weights(), K, tables, opts);
    std::cout << (json ? rot::report_to_json(report) : rot::report_to_text(report));
    if (json) std::cout << "\n";
    return 0;
}

int cmd_calibrate(const std::string& kstar_text, std::uint64_t n, std::uint64_t seed,
                  const std::string& out_path, int threads) {
    const std::vector<int> kstars = parse_kstar_list(kstar_text);
    if (kstars.empty()) {
        std::cerr << "rot calibrate: empty Kstar list\n";
        return kExitInvalid;
    }
    for (int k : kstars) {
        if (k < 1 || (k & (k - 1)) != 0) {
            std::cerr << "rot calibrate: Kstar " << k << " is not a power of two\n";
            return kExitInvalid;
        }
    }
    if (n < 10000) {
        std::cerr << "rot calibrate: need n >= 10000 simulations\n";
        return kExitInvalid;
    }
    const rot::TableSet ts = rot::calibrate_tables(kstars, n, seed, threads);
    rot::save_table_set(ts, out_path);
    return 0;
}

int cmd_power_bench(const rot::BenchConfig& config, const std::string& tables_path,
                    const std::string& out_path) {
    rot::TableSet storage;
    const rot::TableSet& tables = resolve_tables(tables_path, storage);
    const auto rows = rot::run_power_bench(config, tables);
    if (out_path.empty() || out_path == "-") {
        rot::write_bench_csv(std::cout, config, rows);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output: " + out_path);
        rot::write_bench_csv(out, config, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renyi outlier test: p-value combination against the global null"};
    app.require_subcommand(1);

    std::string input_path;
    int K = 1;
    std::string tables_path;
    bool lenient = false;
    bool strict = false;
    bool json = false;
    std::uint64_t seed = 1;
    int threads = 0;

    auto* test = app.add_subcommand("test", "run the outlier test on a p-value file");
    test->add_option("--input,-i", input_path, "delimited input file")->required();
    test->add_option("--K,-K", K, "upper bound on the outlier count")->required();
    test->add_option("--tables", tables_path, "ROTTAB file (default: embedded tables)");
    test->add_flag("--lenient", lenient, "clamp zero p-values instead of failing");
    test->add_flag("--strict", strict, "fail on zero p-values (default)");
    test->add_flag("--json", json, "machine-readable report");
    test->add_option("--seed", seed, "unused for test; accepted for uniformity");
    test->add_option("--threads", threads, "unused for test; accepted for uniformity");

    std::string kstar_text = "1..128";
    std::uint64_t n_sims = 1000000;
    std::string out_path;

    auto* cal = app.add_subcommand("calibrate", "rebuild Monte Carlo lookup tables");
    cal->add_option("--kstar", kstar_text, "comma list / 'lo..hi' powers of two");
    cal->add_option("--n", n_sims, "null replicates per Kstar (>= 10000)");
    cal->add_option("--seed", seed, "stream seed");
    cal->add_option("--out,-o", out_path, "destination ROTTAB file")->required();
    cal->add_option("--threads", threads, "worker threads (0 = hardware)");

    rot::BenchConfig bench;
    std::string methods_text = "rot:16,fixed:4,fixed:128,minp";
    std::string bench_tables;
    std::string bench_out;

    auto* pb = app.add_subcommand("power-bench",
                                  "rejection-rate comparison across methods");
    pb->add_option("--p", bench.p, "number of p-values per replicate");
    pb->add_option("--outliers", bench.n_outliers, "true outlier count");
    pb->add_option("--scale", bench.outlier_scale, "outlier scale (u = scale*Uniform)");
    pb->add_option("--replicates", bench.replicates, "Monte Carlo replicates");
    pb->add_option("--alpha", bench.alpha, "rejection level");
    pb->add_option("--methods", methods_text, "e.g. rot:16,fixed:128,minp");
    pb->add_option("--tables", bench_tables, "ROTTAB file (default: embedded)");
    pb->add_option("--out,-o", bench_out, "CSV destination ('-' = stdout)");
    pb->add_option("--seed", bench.seed, "stream seed");
    pb->add_option("--threads", bench.threads, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (lenient && strict) {
        std::cerr << "rot: --strict and --lenient are mutually exclusive\n";
        return kExitParse;
    }

    try {
        if (test->parsed()) return cmd_test(input_path, K, tables_path, lenient, json);
        if (cal->parsed()) return cmd_calibrate(kstar_text, n_sims, seed, out_path, threads);
        if (pb->parsed()) {
            bench.methods = rot::parse_methods(methods_text);
            if (bench.threads <= 0) bench.threads = threads;
            return cmd_power_bench(bench, bench_tables, bench_out);
        }
    } catch (const rot::ParseError& e) {
        std::cerr << "rot: " << e.what() << "\n";
        return kExitParse;
    } catch (const rot::TableIoError& e) {
        std::cerr << "rot: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const rot::MissingTableError& e) {
        std::cerr << "rot: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rot: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "rot: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "rot: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
