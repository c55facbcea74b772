#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdecay/scenario.hpp"
#include "qdecay/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;

qdecay::QuadratureOptions options_from_env() {
    qdecay::QuadratureOptions opt;
    if (const char* tol = std::getenv("QDECAY_QUAD_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(tol, &end);
        if (end == tol || !(v > 0)) {
            throw qdecay::ValidationError("QDECAY_QUAD_TOL must be a positive number");
        }
        opt.abs_tol = v;
    }
    return opt;
}

int cmd_run(const std::string& file, const std::string& out_dir, bool print_normalized) {
    const qdecay::Scenario s = qdecay::load_scenario(file);
    if (print_normalized) {
        std::cout << qdecay::normalized_scenario_json(s);
        return 0;
    }
    const qdecay::ResultTable table = qdecay::run_scenario(s, options_from_env());
    const std::string body = s.output_format == qdecay::OutputFormat::csv
                                 ? qdecay::format_table_csv(table)
                                 : qdecay::format_table_text(table);
    const std::filesystem::path path = std::filesystem::path(out_dir) / s.output_path;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return 1;
    }
    out << body;
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_compare(const std::string& file, const std::string& a, const std::string& b) {
    qdecay::Scenario s = qdecay::load_scenario(file);
    const qdecay::ResultTable table = qdecay::run_scenario(s, options_from_env());
    const qdecay::CompareSummary summary = qdecay::compare_treatments(table, a, b);
    std::cout << "scenario " << s.name << "\n" << qdecay::format_compare(summary);
    return 0;
}

int cmd_regime(double M, double Gamma, double sigma_p, double v) {
    const qdecay::RegimeReport r = qdecay::check_regime(M, Gamma, sigma_p, v);
    std::cout << "ratio_width " << r.ratio_width << "\n"
              << "ratio_packet " << r.ratio_packet << "\n"
              << "sigma_x " << r.sigma_x << "\n"
              << "tau " << r.tau << "\n"
              << "predicted_gap " << r.predicted_gap << "\n"
              << "verdict " << qdecay::to_string(r.verdict) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"survival probability of an unstable system at rest and in relativistic motion"};
    app.set_version_flag("--version", std::string("qdecay ") + qdecay::kVersion);
    app.require_subcommand(1);

    std::string run_file, out_dir = ".";
    bool print_normalized = false;
    CLI::App* run = app.add_subcommand("run", "evaluate a scenario file and write its output table");
    run->add_option("file", run_file, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");
    run->add_flag("--print-normalized", print_normalized,
                  "print the normalized scenario instead of running it");

    std::string cmp_file, cmp_a, cmp_b;
    CLI::App* cmp = app.add_subcommand("compare", "gap statistics between two treatments");
    cmp->add_option("file", cmp_file, "scenario JSON file")->required();
    cmp->add_option("--a", cmp_a, "first treatment")->required();
    cmp->add_option("--b", cmp_b, "second treatment")->required();

    double M = 0, Gamma = 0, sigma_p = 0, v = 0;
    CLI::App* reg = app.add_subcommand("regime", "measurability check for the given scales");
    reg->add_option("--M", M, "mass")->required();
    reg->add_option("--gamma", Gamma, "decay width")->required();
    reg->add_option("--sigma-p", sigma_p, "momentum spread")->required();
    reg->add_option("--v", v, "speed (fraction of c)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_file, out_dir, print_normalized);
        if (cmp->parsed()) return cmd_compare(cmp_file, cmp_a, cmp_b);
        if (reg->parsed()) return cmd_regime(M, Gamma, sigma_p, v);
    } catch (const qdecay::QuadratureNonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const qdecay::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
