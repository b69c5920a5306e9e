#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

// Run the CLI, capturing stdout; stderr goes to the test log.
RunResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "rot_cli_out.txt";
    const std::string cmd = std::string(ROT_CLI_PATH) + " " + args + " > " + out.string();
    const int raw = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("test subcommand: json report and exit codes") {
    const auto input = write_file("cli_ok.tsv", "id\tp\na\t0.5\nb\t0.02\nc\t0.9\n");

    auto res = run_cli("test --input " + input.string() + " --K 2 --json");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["p"] == 3);
    CHECK(j["Kstar"] == 2);
    CHECK(j["pvalue"].get<double>() > 0.0);

    res = run_cli("test --input " + input.string() + " --K 2");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("log10 p-value") != std::string::npos);

    const auto bad = write_file("cli_bad.tsv", "id\tp\na\t1.5\n");
    CHECK(run_cli("test --input " + bad.string() + " --K 1").exit_code == 2);

    CHECK(run_cli("test --input " + input.string() + " --K 0").exit_code == 3);
    CHECK(run_cli("test --input " + input.string()).exit_code == 2);  // missing --K

    const auto zero = write_file("cli_zero.tsv", "id\tp\na\t0\nb\t0.5\n");
    CHECK(run_cli("test --input " + zero.string() + " --K 1").exit_code == 4);
    CHECK(run_cli("test --input " + zero.string() + " --K 1 --lenient").exit_code == 0);
}

TEST_CASE("calibrate subcommand: validation and determinism") {
    const fs::path out1 = fs::temp_directory_path() / "rot_t1.rottab";
    const fs::path out2 = fs::temp_directory_path() / "rot_t2.rottab";

    CHECK(run_cli("calibrate --kstar 3 --n 10000 --out " + out1.string()).exit_code == 3);
    CHECK(run_cli("calibrate --kstar 2 --n 500 --out " + out1.string()).exit_code == 3);

    CHECK(run_cli("calibrate --kstar 2 --n 10000 --seed 5 --out " + out1.string())
              .exit_code == 0);
    CHECK(run_cli("calibrate --kstar 2 --n 10000 --seed 5 --out " + out2.string())
              .exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));

    // the emitted file is usable by `test`
    const auto input = write_file(
        "cli_tbl.tsv", "id\tp\na\t0.001\nb\t0.5\nc\t0.9\nd\t0.3\ne\t0.7\n");
    const auto res = run_cli("test --input " + input.string() + " --K 2 --tables " +
                             out1.string() + " --json");
    CHECK(res.exit_code == 0);

    // K rounds to Kstar = 4, which the provided file does not cover
    CHECK(run_cli("test --input " + input.string() + " --K 3 --tables " +
                  out1.string())
              .exit_code == 3);
}

TEST_CASE("power-bench subcommand") {
    auto res = run_cli("power-bench --p 50 --replicates 40 --alpha 0.2 "
                       "--methods minp,fixed:2,rot:1 --seed 3");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("method,") != std::string::npos);
    CHECK(res.output.find("min_p_bonferroni") != std::string::npos);
    CHECK(res.output.find("fixed_k2") != std::string::npos);

    CHECK(run_cli("power-bench --p 50 --replicates 0 --methods minp").exit_code != 0);
    CHECK(run_cli("power-bench --p 50 --replicates 10 --methods wat:3").exit_code != 0);
}
