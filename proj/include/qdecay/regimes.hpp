#pragma once

#include <vector>

#include "qdecay/errors.hpp"
#include "qdecay/mass_distribution.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay {

enum class RegimeVerdict { ok, marginal, violated };

const char* to_string(RegimeVerdict v);

/// Dimensionless measurability conditions for the decay law of a moving
/// wave packet: the width must be well below the packet spread, and the
/// packet spread well below the mass. Equivalently, the localization
/// length sigma_x = 1/sigma_p must sit between 1/M and the lifetime.
struct RegimeReport {
    double ratio_width = 0;  ///< Gamma / sigma_p
    double ratio_packet = 0; ///< sigma_p / M
    double sigma_x = 0;      ///< 1 / sigma_p
    double tau = 0;          ///< 1 / Gamma
    RegimeVerdict verdict = RegimeVerdict::violated;
    /// Leading narrow-width error scale (v * Gamma / (2 sigma_p))^2 from
    /// the quadratic expansion of the Gaussian overlap. Heavy-tailed mass
    /// densities (Breit-Wigner) exceed it; see gap_scan.
    double predicted_gap = 0;
};

/// "Much smaller" is quantified as: ok below 0.01, marginal below 0.1,
/// violated otherwise; the verdict is the worse of the two ratios.
RegimeReport check_regime(double M, double Gamma, double sigma_p, double v);

struct GapScanRow {
    double sigma_p = 0;
    double ratio_width = 0;
    double measured_gap = 0;  ///< max_t |exact - approx|
    double predicted_gap = 0;
};

/// Sweep packet widths and record how the exact/approx gap tracks the
/// predicted quadratic scale.
std::vector<GapScanRow> gap_scan(const MassDistribution& dist, const std::vector<double>& sigma_ps,
                                 double v, const TimeGrid& grid, const QuadratureOptions& opt = {});

} // namespace qdecay
