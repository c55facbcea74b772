#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "qdecay/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("qdecay_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args, const std::string& env = "") {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + QDECAY_CLI_PATH + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_file(const std::string& name, const std::string& body) {
    const fs::path p = work_dir() / name;
    std::ofstream f(p, std::ios::binary);
    f << body;
    return p;
}

const char* kScenario = R"({
  "name": "cli-demo",
  "dist": {"family": "breit_wigner", "M": 1.0, "Gamma": 1.0},
  "boost": {"v": 0.6},
  "grid": {"start": 0.0, "stop": 5.0, "points": 6},
  "treatments": ["rest", "naive", "heuristic"],
  "output": {"path": "demo.csv"}
})";

} // namespace

TEST_CASE("run writes the expected csv and exits cleanly") {
    const auto file = write_file("demo.json", kScenario);
    const auto r = run_cli("run " + file.string() + " --out " + (work_dir() / "out1").string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(work_dir() / "out1" / "demo.csv");
    CHECK(csv.find("t,rest,rest_err,naive,naive_err,heuristic,heuristic_err\n") != std::string::npos);
    // survival after one lifetime, 17 significant digits
    CHECK(csv.find("0.36787944117144233") != std::string::npos);
}

TEST_CASE("identical runs produce byte-identical files") {
    const auto file = write_file("demo.json", kScenario);
    const auto r1 = run_cli("run " + file.string() + " --out " + (work_dir() / "outA").string());
    const auto r2 = run_cli("run " + file.string() + " --out " + (work_dir() / "outB").string());
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const std::string a = slurp(work_dir() / "outA" / "demo.csv");
    const std::string b = slurp(work_dir() / "outB" / "demo.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("print-normalized round-trips through the parser") {
    const auto file = write_file("demo.json", kScenario);
    const auto r = run_cli("run " + file.string() + " --print-normalized");
    CHECK(r.exit_code == 0);
    const auto reparsed = qdecay::parse_scenario(r.out);
    CHECK(qdecay::normalized_scenario_json(reparsed) == r.out);
}

TEST_CASE("validation failures exit with code 2 and a diagnostic") {
    const auto empty = write_file("empty.json", R"({
      "dist": {"family": "breit_wigner", "M": 1.0, "Gamma": 1.0},
      "grid": {"start": 0.0, "stop": 5.0, "points": 6},
      "treatments": []
    })");
    const auto r = run_cli("run " + empty.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no treatments selected") != std::string::npos);

    const auto missing = run_cli("run " + (work_dir() / "does_not_exist.json").string());
    CHECK(missing.exit_code == 2);

    const auto badflag = run_cli("run");
    CHECK(badflag.exit_code == 2);
}

TEST_CASE("unreachable tolerance exits with code 3 naming the treatment") {
    const auto file = write_file("hard.json", R"({
      "dist": {"family": "breit_wigner_truncated", "M": 1.0, "Gamma": 0.1, "m_threshold": 0.0},
      "grid": {"start": 0.0, "stop": 5.0, "points": 3},
      "treatments": ["rest"]
    })");
    const auto r = run_cli("run " + file.string() + " --out " + work_dir().string(),
                           "QDECAY_QUAD_TOL=1e-19");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("treatment 'rest'") != std::string::npos);
    CHECK(r.err.find("t=") != std::string::npos);
}

TEST_CASE("compare reports the naive/heuristic discrepancy") {
    const auto file = write_file("demo.json", kScenario);
    const auto r = run_cli("compare " + file.string() + " --a naive --b heuristic");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("max_abs_gap 0.16282416725703") != std::string::npos);

    const auto miss = run_cli("compare " + file.string() + " --a rest --b wp_exact");
    CHECK(miss.exit_code == 2);
    CHECK(miss.err.find("missing") != std::string::npos);
}

TEST_CASE("regime subcommand prints the verdict") {
    const auto ok = run_cli("regime --M 100 --gamma 1e-14 --sigma-p 1.9732698e-3 --v 0.9");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("verdict ok") != std::string::npos);

    const auto bad = run_cli("regime --M 1 --gamma 1 --sigma-p 1 --v 0.5");
    CHECK(bad.exit_code == 0);
    CHECK(bad.out.find("verdict violated") != std::string::npos);

    const auto invalid = run_cli("regime --M 1 --gamma 1 --sigma-p 1 --v 1.5");
    CHECK(invalid.exit_code == 2);
}

TEST_CASE("structured text output format") {
    const auto file = write_file("text.json", R"({
      "name": "text-demo",
      "dist": {"family": "gaussian", "M": 1.0, "sigma_m": 0.1},
      "grid": {"start": 0.0, "stop": 1.0, "points": 2},
      "treatments": ["rest"],
      "output": {"path": "demo.txt", "format": "structured-text"}
    })");
    const auto r = run_cli("run " + file.string() + " --out " + (work_dir() / "outT").string());
    CHECK(r.exit_code == 0);
    const std::string text = slurp(work_dir() / "outT" / "demo.txt");
    CHECK(text.find("scenario text-demo") != std::string::npos);
    CHECK(text.find("row t=1 rest=0.990049833749168") != std::string::npos);
}
