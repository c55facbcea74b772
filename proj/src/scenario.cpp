#include "qdecay/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdecay/version.hpp"

namespace qdecay {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kTreatments = {"rest", "naive", "heuristic", "wp_exact", "wp_approx", "oracle"};

bool is_wavepacket_treatment(const std::string& t) { return t == "wp_exact" || t == "wp_approx"; }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError("scenario: " + where + ": " + what);
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where, "missing field '" + key + "'");
    if (!obj[key].is_number()) fail(where + "." + key, "expected a number");
    return obj[key].get<double>();
}

std::string require_string(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where, "missing field '" + key + "'");
    if (!obj[key].is_string()) fail(where + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

MassDistribution parse_dist(const json& j) {
    if (!j.is_object()) fail("dist", "expected an object");
    const std::string family = require_string(j, "dist", "family");
    const double M = require_number(j, "dist", "M");
    try {
        if (family == "breit_wigner")
            return MassDistribution::breit_wigner(M, require_number(j, "dist", "Gamma"));
        if (family == "breit_wigner_truncated")
            return MassDistribution::breit_wigner_truncated(M, require_number(j, "dist", "Gamma"),
                                                            require_number(j, "dist", "m_threshold"));
        if (family == "gaussian")
            return MassDistribution::gaussian(M, require_number(j, "dist", "sigma_m"));
    } catch (const ValidationError& e) {
        fail("dist", e.what());
    }
    fail("dist.family", "unknown family '" + family + "'");
}

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void append_regime_fields(std::string& out, const RegimeReport& r) {
    out += "ratio_width=" + format_g17(r.ratio_width);
    out += " ratio_packet=" + format_g17(r.ratio_packet);
    out += " sigma_x=" + format_g17(r.sigma_x);
    out += " tau=" + format_g17(r.tau);
    out += " predicted_gap=" + format_g17(r.predicted_gap);
    out += " verdict=";
    out += to_string(r.verdict);
}

} // namespace

const std::vector<std::string>& known_treatments() { return kTreatments; }

namespace {
Scenario parse_scenario_impl(const std::string& json_text);
} // namespace

Scenario parse_scenario(const std::string& json_text) {
    try {
        return parse_scenario_impl(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
}

namespace {

Scenario parse_scenario_impl(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("scenario: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) fail("root", "expected a JSON object");

    Scenario s;
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail("name", "expected a string");
        s.name = j["name"].get<std::string>();
    }
    if (!j.contains("dist")) fail("root", "missing field 'dist'");
    s.dist = parse_dist(j["dist"]);

    if (j.contains("packet") && !j["packet"].is_null()) {
        const json& p = j["packet"];
        if (!p.is_object()) fail("packet", "expected an object");
        if (p.contains("shape") && p["shape"].get<std::string>() != "gaussian")
            fail("packet.shape", "unknown shape '" + p["shape"].get<std::string>() + "'");
        try {
            s.packet = MomentumPacket::gaussian_packet(require_number(p, "packet", "sigma_p"));
        } catch (const ValidationError& e) {
            fail("packet", e.what());
        }
    }

    double v = 0.0;
    if (j.contains("boost")) {
        if (!j["boost"].is_object()) fail("boost", "expected an object");
        v = require_number(j["boost"], "boost", "v");
    }
    try {
        s.boost = Boost::from_velocity(v);
    } catch (const ValidationError& e) {
        fail("boost.v", e.what());
    }

    if (!j.contains("grid")) fail("root", "missing field 'grid'");
    {
        const json& g = j["grid"];
        if (!g.is_object()) fail("grid", "expected an object");
        const double start = require_number(g, "grid", "start");
        const double stop = require_number(g, "grid", "stop");
        const double pts = require_number(g, "grid", "points");
        std::string spacing = "uniform";
        if (g.contains("spacing")) spacing = require_string(g, "grid", "spacing");
        if (pts != std::floor(pts) || pts < 2) fail("grid.points", "expected an integer >= 2");
        try {
            if (spacing == "uniform")
                s.grid = TimeGrid::uniform(start, stop, static_cast<int>(pts));
            else if (spacing == "log")
                s.grid = TimeGrid::logspace(start, stop, static_cast<int>(pts));
            else
                fail("grid.spacing", "expected 'uniform' or 'log'");
        } catch (const ValidationError& e) {
            fail("grid", e.what());
        }
    }

    if (!j.contains("treatments")) fail("root", "missing field 'treatments'");
    if (!j["treatments"].is_array()) fail("treatments", "expected an array");
    std::vector<std::string> requested;
    for (const auto& t : j["treatments"]) {
        if (!t.is_string()) fail("treatments", "expected strings");
        const std::string name = t.get<std::string>();
        if (std::find(kTreatments.begin(), kTreatments.end(), name) == kTreatments.end())
            fail("treatments", "unknown treatment '" + name + "'");
        requested.push_back(name);
    }
    // canonical order, duplicates dropped
    for (const auto& t : kTreatments)
        if (std::find(requested.begin(), requested.end(), t) != requested.end()) s.treatments.push_back(t);
    if (s.treatments.empty()) fail("treatments", "no treatments selected");

    const bool wants_packet =
        std::any_of(s.treatments.begin(), s.treatments.end(), is_wavepacket_treatment);
    if (wants_packet && !s.packet)
        fail("packet", "wavepacket treatments require a momentum packet");
    if (!wants_packet && s.packet)
        fail("packet", "momentum packet given but no wavepacket treatment requested");

    if (j.contains("output")) {
        const json& o = j["output"];
        if (!o.is_object()) fail("output", "expected an object");
        if (o.contains("path")) s.output_path = require_string(o, "output", "path");
        if (o.contains("format")) {
            const std::string f = require_string(o, "output", "format");
            if (f == "csv")
                s.output_format = OutputFormat::csv;
            else if (f == "structured-text")
                s.output_format = OutputFormat::structured_text;
            else
                fail("output.format", "expected 'csv' or 'structured-text'");
        }
    }
    if (s.output_path.empty()) fail("output.path", "must not be empty");

    if (j.contains("unit_note")) {
        if (!j["unit_note"].is_string()) fail("unit_note", "expected a string");
        s.unit_note = j["unit_note"].get<std::string>();
    }
    return s;
}

} // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string normalized_scenario_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    json d;
    switch (s.dist.family) {
    case MassFamily::breit_wigner_full_line:
        d["family"] = "breit_wigner";
        d["M"] = s.dist.M;
        d["Gamma"] = s.dist.Gamma;
        break;
    case MassFamily::breit_wigner_truncated:
        d["family"] = "breit_wigner_truncated";
        d["M"] = s.dist.M;
        d["Gamma"] = s.dist.Gamma;
        d["m_threshold"] = s.dist.m_threshold;
        break;
    case MassFamily::gaussian:
        d["family"] = "gaussian";
        d["M"] = s.dist.M;
        d["sigma_m"] = s.dist.sigma_m;
        break;
    }
    d["norm_const"] = s.dist.norm_const;
    j["dist"] = d;
    if (s.packet) {
        json p;
        p["shape"] = "gaussian";
        p["sigma_p"] = s.packet->sigma_p;
        j["packet"] = p;
    }
    j["boost"] = json{{"v", s.boost.v}};
    json g;
    g["start"] = s.grid.t_start;
    g["stop"] = s.grid.t_stop;
    g["points"] = s.grid.n_points;
    g["spacing"] = s.grid.spacing == GridSpacing::uniform ? "uniform" : "log";
    j["grid"] = g;
    j["treatments"] = s.treatments;
    j["output"] = json{{"path", s.output_path},
                       {"format", s.output_format == OutputFormat::csv ? "csv" : "structured-text"}};
    j["unit_note"] = s.unit_note;
    return j.dump(2) + "\n";
}

std::uint64_t scenario_hash(const Scenario& s) {
    const std::string text = normalized_scenario_json(s);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ResultTable run_scenario(const Scenario& s, const QuadratureOptions& opt) {
    ResultTable table;
    table.scenario_name = s.name;
    table.hash = scenario_hash(s);
    table.unit_note = s.unit_note;
    table.t = s.grid.times();
    if (s.packet)
        table.regime = check_regime(s.dist.M, s.dist.Gamma, s.packet->sigma_p, s.boost.v);

    auto push = [&table](const std::string& name, const SurvivalCurve& c) {
        table.columns.push_back(name);
        table.values.push_back(c.values);
        table.errors.push_back(c.error_estimates);
    };

    for (const auto& name : s.treatments) {
        try {
            if (name == "rest") {
                push(name, survival_rest(s.dist, s.grid, opt));
            } else if (name == "naive") {
                push(name, survival_naive_boost(s.dist, s.boost, s.grid, opt));
            } else if (name == "heuristic") {
                push(name, survival_heuristic(s.dist, s.boost, s.grid, opt));
            } else if (name == "wp_exact") {
                push(name, survival_wavepacket_exact(
                               WavepacketScenario::make(s.dist, *s.packet, s.boost, 3), s.grid, opt));
            } else if (name == "wp_approx") {
                push(name, survival_wavepacket_approx(
                               WavepacketScenario::make(s.dist, *s.packet, s.boost, 3), s.grid, opt));
            } else if (name == "oracle") {
                SurvivalCurve c;
                c.values.resize(table.t.size());
                c.error_estimates.resize(table.t.size());
                for (Eigen::Index i = 0; i < table.t.size(); ++i) {
                    const OscillatoryResult r = riemann_oracle(s.dist, table.t[i], 200000);
                    const double mag = std::abs(r.value);
                    c.values[i] = mag * mag;
                    c.error_estimates[i] =
                        2.0 * mag * r.abs_error_estimate + r.abs_error_estimate * r.abs_error_estimate;
                }
                push(name, c);
            }
        } catch (const QuadratureNonConvergenceError& e) {
            throw QuadratureNonConvergenceError("treatment '" + name + "' failed to converge at t=" +
                                                    format_g17(e.t) + ": " + e.what(),
                                                e.t, e.achieved_error, e.target_tolerance);
        }
    }
    return table;
}

std::string format_table_csv(const ResultTable& table) {
    std::string out;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx", static_cast<unsigned long long>(table.hash));
    out += std::string("# qdecay ") + kVersion + "\n";
    out += "# scenario: " + table.scenario_name + "\n";
    out += std::string("# hash: ") + hash_hex + "\n";
    if (table.regime) {
        out += "# regime: ";
        append_regime_fields(out, *table.regime);
        out += "\n";
    }
    if (!table.unit_note.empty()) out += "# unit_note: " + table.unit_note + "\n";

    out += "t";
    for (const auto& c : table.columns) out += "," + c + "," + c + "_err";
    out += "\n";
    for (Eigen::Index i = 0; i < table.t.size(); ++i) {
        out += format_g17(table.t[i]);
        for (size_t k = 0; k < table.columns.size(); ++k) {
            out += "," + format_g17(table.values[k][i]);
            out += "," + format_g17(table.errors[k][i]);
        }
        out += "\n";
    }
    return out;
}

std::string format_table_text(const ResultTable& table) {
    std::string out;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx", static_cast<unsigned long long>(table.hash));
    out += std::string("qdecay ") + kVersion + "\n";
    out += "scenario " + table.scenario_name + "\n";
    out += std::string("hash ") + hash_hex + "\n";
    if (table.regime) {
        out += "regime ";
        append_regime_fields(out, *table.regime);
        out += "\n";
    }
    if (!table.unit_note.empty()) out += "unit_note " + table.unit_note + "\n";
    for (Eigen::Index i = 0; i < table.t.size(); ++i) {
        out += "row t=" + format_g17(table.t[i]);
        for (size_t k = 0; k < table.columns.size(); ++k) {
            out += " " + table.columns[k] + "=" + format_g17(table.values[k][i]);
            out += " " + table.columns[k] + "_err=" + format_g17(table.errors[k][i]);
        }
        out += "\n";
    }
    return out;
}

CompareSummary compare_treatments(const ResultTable& table, const std::string& a, const std::string& b) {
    auto column = [&table](const std::string& name) -> const Eigen::ArrayXd& {
        for (size_t k = 0; k < table.columns.size(); ++k)
            if (table.columns[k] == name) return table.values[k];
        throw ValidationError("compare: treatment '" + name + "' missing from the scenario outputs");
    };
    const Eigen::ArrayXd& va = column(a);
    const Eigen::ArrayXd& vb = column(b);
    const Eigen::ArrayXd gap = (va - vb).abs();
    CompareSummary s;
    s.a = a;
    s.b = b;
    Eigen::Index imax = 0;
    s.max_abs_gap = gap.maxCoeff(&imax);
    s.mean_abs_gap = gap.mean();
    s.t_at_max = table.t[imax];
    if (table.regime) s.predicted_gap = table.regime->predicted_gap;
    return s;
}

std::string format_compare(const CompareSummary& s) {
    std::string out;
    out += "a " + s.a + "\n";
    out += "b " + s.b + "\n";
    out += "max_abs_gap " + format_g17(s.max_abs_gap) + "\n";
    out += "mean_abs_gap " + format_g17(s.mean_abs_gap) + "\n";
    out += "t_at_max " + format_g17(s.t_at_max) + "\n";
    if (s.predicted_gap) out += "predicted_gap " + format_g17(*s.predicted_gap) + "\n";
    return out;
}

} // namespace qdecay
