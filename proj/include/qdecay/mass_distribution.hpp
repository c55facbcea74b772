#pragma once

#include <optional>

#include "qdecay/errors.hpp"

namespace qdecay {

enum class MassFamily {
    breit_wigner_full_line, ///< Lorentzian on the whole real line
    breit_wigner_truncated, ///< Lorentzian restricted to m >= m_threshold
    gaussian,               ///< normal density (finite mean and variance)
};

struct Moments {
    std::optional<double> mean; ///< empty when the mean integral diverges
    double fwhm = 0;
};

/// Normalized rest-energy density |rho(m)|^2 of an unstable system.
///
/// All quantities are in natural units (hbar = c = 1) with a single free
/// energy scale. For the Gaussian family, `Gamma` holds the full width at
/// half maximum derived from `sigma_m`, so regime checks treat all
/// families uniformly.
struct MassDistribution {
    MassFamily family = MassFamily::breit_wigner_full_line;
    double M = 0;           ///< peak position (kinematical mass)
    double Gamma = 0;       ///< full width at half maximum
    double sigma_m = 0;     ///< standard deviation (gaussian family only)
    double m_threshold = 0; ///< lower support bound (truncated family only)
    double norm_const = 1;  ///< multiplier making the support integral 1

    static MassDistribution breit_wigner(double M, double Gamma);
    static MassDistribution breit_wigner_truncated(double M, double Gamma, double m_threshold);
    static MassDistribution gaussian(double M, double sigma_m);

    double support_lower() const;
    double support_upper() const;
};

/// Density at m; zero outside the declared support.
double pdf(const MassDistribution& dist, double m);

/// Returns a copy with norm_const set so the support integral equals 1.
/// Throws NonNormalizableError when the support mass degenerates.
MassDistribution normalize(MassDistribution dist);

/// Mean (when defined) and full width at half maximum.
/// Both Breit-Wigner families report an undefined mean: the full-line
/// Lorentzian has no mean and the truncated one diverges logarithmically.
Moments moments(const MassDistribution& dist);

/// Probability mass strictly above m (closed form).
double mass_above(const MassDistribution& dist, double m);

/// Probability mass strictly below m (closed form).
double mass_below(const MassDistribution& dist, double m);

/// Probability mass of [a, b] intersected with the support (closed form).
double mass_between(const MassDistribution& dist, double a, double b);

/// Half width of the central peak, used to seed quadrature panels.
double width_scale(const MassDistribution& dist);

/// Smallest r such that the mass outside [M - r, M + r] is below `tail`.
double mass_window_radius(const MassDistribution& dist, double tail);

/// Total variation of the density: integral of |pdf'|.
double total_variation(const MassDistribution& dist);

/// Integral of |pdf''| over the support (upper bound, closed form).
double second_variation(const MassDistribution& dist);

} // namespace qdecay
