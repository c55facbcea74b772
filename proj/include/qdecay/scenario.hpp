#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qdecay/wavepacket.hpp"

namespace qdecay {

enum class OutputFormat { csv, structured_text };

/// One self-contained run description: a mass distribution, an optional
/// momentum packet, a boost, a time grid and the treatments to evaluate.
struct Scenario {
    std::string name = "scenario";
    MassDistribution dist;
    std::optional<MomentumPacket> packet;
    Boost boost;
    TimeGrid grid;
    std::vector<std::string> treatments; ///< canonical order, validated
    std::string output_path = "out.csv";
    OutputFormat output_format = OutputFormat::csv;
    std::string unit_note; ///< free-form; the library itself is unit-agnostic
};

/// Treatment names accepted in scenario files, in canonical column order.
const std::vector<std::string>& known_treatments();

/// Parse and validate a scenario from JSON text.
/// Throws ValidationError with a field-level diagnostic on any problem.
Scenario parse_scenario(const std::string& json_text);

Scenario load_scenario(const std::string& path);

/// Canonical JSON rendering: fixed key order, canonical treatment order,
/// derived quantities included. Re-parsing it yields the same scenario.
std::string normalized_scenario_json(const Scenario& s);

/// FNV-1a over the normalized rendering.
std::uint64_t scenario_hash(const Scenario& s);

struct ResultTable {
    std::string scenario_name;
    std::uint64_t hash = 0;
    std::string unit_note;
    Eigen::ArrayXd t;
    std::vector<std::string> columns;
    std::vector<Eigen::ArrayXd> values;
    std::vector<Eigen::ArrayXd> errors;
    std::optional<RegimeReport> regime;
};

/// Evaluate every requested treatment. Deterministic: fixed quadrature
/// settings, no randomness. QuadratureNonConvergenceError is rethrown
/// with the treatment name and failing time in the message.
ResultTable run_scenario(const Scenario& s, const QuadratureOptions& opt = {});

/// CSV with '#'-prefixed metadata (version, hash, regime), a mandatory
/// header row, 17-significant-digit decimals and newline-terminated rows.
std::string format_table_csv(const ResultTable& table);

/// Plain key=value text rendering of the same data.
std::string format_table_text(const ResultTable& table);

struct CompareSummary {
    std::string a;
    std::string b;
    double max_abs_gap = 0;
    double mean_abs_gap = 0;
    double t_at_max = 0;
    std::optional<double> predicted_gap;
};

/// Descriptive gap statistics between two computed treatments.
/// Throws ValidationError when either column is missing.
CompareSummary compare_treatments(const ResultTable& table, const std::string& a, const std::string& b);

std::string format_compare(const CompareSummary& s);

} // namespace qdecay
