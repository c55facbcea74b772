#include "qdecay/mass_distribution.hpp"

#include <cmath>
#include <limits>

namespace qdecay {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
// fwhm / sigma for a normal density
const double kGaussFwhm = 2.0 * std::sqrt(2.0 * std::log(2.0));

// P(Y > u) for a Cauchy variable with scale a centered at 0.
// atan2(a, u)/pi is monotone and loses no precision in either tail.
double cauchy_upper_tail(double u, double a) { return std::atan2(a, u) / kPi; }

void check_common(double M, double Gamma) {
    if (!(std::isfinite(M) && M > 0)) throw ValidationError("mass distribution: M must be positive and finite");
    if (!(std::isfinite(Gamma) && Gamma > 0)) throw ValidationError("mass distribution: Gamma must be positive and finite");
}

} // namespace

MassDistribution MassDistribution::breit_wigner(double M, double Gamma) {
    check_common(M, Gamma);
    MassDistribution d;
    d.family = MassFamily::breit_wigner_full_line;
    d.M = M;
    d.Gamma = Gamma;
    return normalize(d);
}

MassDistribution MassDistribution::breit_wigner_truncated(double M, double Gamma, double m_threshold) {
    check_common(M, Gamma);
    if (!(std::isfinite(m_threshold) && m_threshold < M))
        throw ValidationError("mass distribution: m_threshold must lie below M");
    MassDistribution d;
    d.family = MassFamily::breit_wigner_truncated;
    d.M = M;
    d.Gamma = Gamma;
    d.m_threshold = m_threshold;
    return normalize(d);
}

MassDistribution MassDistribution::gaussian(double M, double sigma_m) {
    if (!(std::isfinite(M) && M > 0)) throw ValidationError("mass distribution: M must be positive and finite");
    if (!(std::isfinite(sigma_m) && sigma_m > 0))
        throw ValidationError("mass distribution: sigma_m must be positive and finite");
    MassDistribution d;
    d.family = MassFamily::gaussian;
    d.M = M;
    d.sigma_m = sigma_m;
    d.Gamma = kGaussFwhm * sigma_m;
    return normalize(d);
}

double MassDistribution::support_lower() const {
    return family == MassFamily::breit_wigner_truncated ? m_threshold : -kInf;
}

double MassDistribution::support_upper() const { return kInf; }

double pdf(const MassDistribution& dist, double m) {
    const double u = m - dist.M;
    switch (dist.family) {
    case MassFamily::breit_wigner_full_line: {
        const double a = 0.5 * dist.Gamma;
        return dist.norm_const * (dist.Gamma / (2.0 * kPi)) / (u * u + a * a);
    }
    case MassFamily::breit_wigner_truncated: {
        if (m < dist.m_threshold) return 0.0;
        const double a = 0.5 * dist.Gamma;
        return dist.norm_const * (dist.Gamma / (2.0 * kPi)) / (u * u + a * a);
    }
    case MassFamily::gaussian: {
        const double z = u / dist.sigma_m;
        return dist.norm_const * std::exp(-0.5 * z * z) / (dist.sigma_m * std::sqrt(2.0 * kPi));
    }
    }
    return 0.0;
}

MassDistribution normalize(MassDistribution dist) {
    double raw_mass = 0; // support integral of the un-normalized density
    switch (dist.family) {
    case MassFamily::breit_wigner_full_line:
        raw_mass = dist.Gamma > 0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
        break;
    case MassFamily::breit_wigner_truncated:
        raw_mass = cauchy_upper_tail(dist.m_threshold - dist.M, 0.5 * dist.Gamma);
        if (!(dist.Gamma > 0)) raw_mass = std::numeric_limits<double>::quiet_NaN();
        break;
    case MassFamily::gaussian:
        raw_mass = dist.sigma_m > 0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
        break;
    }
    if (!(std::isfinite(raw_mass) && raw_mass > 0))
        throw NonNormalizableError("mass distribution: support integral is zero or divergent");
    dist.norm_const = 1.0 / raw_mass;
    return dist;
}

Moments moments(const MassDistribution& dist) {
    Moments mo;
    switch (dist.family) {
    case MassFamily::breit_wigner_full_line:
    case MassFamily::breit_wigner_truncated:
        // full line: the mean integral does not converge absolutely;
        // truncated: the 1/m^2 upper tail makes it diverge logarithmically
        mo.mean = std::nullopt;
        mo.fwhm = dist.Gamma;
        break;
    case MassFamily::gaussian:
        mo.mean = dist.M;
        mo.fwhm = kGaussFwhm * dist.sigma_m;
        break;
    }
    return mo;
}

double mass_above(const MassDistribution& dist, double m) {
    const double u = m - dist.M;
    switch (dist.family) {
    case MassFamily::breit_wigner_full_line:
        return cauchy_upper_tail(u, 0.5 * dist.Gamma);
    case MassFamily::breit_wigner_truncated: {
        const double lifted = std::max(m, dist.m_threshold);
        return dist.norm_const * cauchy_upper_tail(lifted - dist.M, 0.5 * dist.Gamma);
    }
    case MassFamily::gaussian:
        return 0.5 * std::erfc(u / (dist.sigma_m * std::sqrt(2.0)));
    }
    return 0.0;
}

double mass_below(const MassDistribution& dist, double m) { return 1.0 - mass_above(dist, m); }

double mass_between(const MassDistribution& dist, double a, double b) {
    if (b <= a) return 0.0;
    return std::max(0.0, mass_above(dist, a) - mass_above(dist, b));
}

double width_scale(const MassDistribution& dist) {
    return dist.family == MassFamily::gaussian ? dist.sigma_m : 0.5 * dist.Gamma;
}

double mass_window_radius(const MassDistribution& dist, double tail) {
    tail = std::max(tail, 1e-300);
    switch (dist.family) {
    case MassFamily::breit_wigner_full_line: {
        const double a = 0.5 * dist.Gamma;
        const double angle = std::min(0.5 * kPi * tail, 0.5 * kPi);
        return a / std::tan(angle);
    }
    case MassFamily::breit_wigner_truncated: {
        const double a = 0.5 * dist.Gamma;
        const double angle = std::min(kPi * tail / dist.norm_const, 0.5 * kPi);
        return std::max(a / std::tan(angle), dist.M - dist.m_threshold);
    }
    case MassFamily::gaussian: {
        const double z = std::sqrt(std::max(2.0 * std::log(2.0 / tail), 1.0)) + 1.0;
        return z * dist.sigma_m;
    }
    }
    return 0.0;
}

double total_variation(const MassDistribution& dist) {
    const double peak = pdf(dist, dist.M);
    if (dist.family == MassFamily::breit_wigner_truncated) return 2.0 * peak - pdf(dist, dist.m_threshold);
    return 2.0 * peak;
}

double second_variation(const MassDistribution& dist) {
    switch (dist.family) {
    case MassFamily::breit_wigner_full_line:
    case MassFamily::breit_wigner_truncated: {
        const double a = 0.5 * dist.Gamma;
        const double base = 3.0 * std::sqrt(3.0) * dist.norm_const / (2.0 * kPi * a * a);
        if (dist.family == MassFamily::breit_wigner_truncated) {
            // add the boundary jump of pdf' at the threshold
            const double u = dist.m_threshold - dist.M;
            const double c = dist.norm_const * dist.Gamma / (2.0 * kPi);
            const double d2 = u * u + a * a;
            return base + std::abs(-2.0 * c * u / (d2 * d2));
        }
        return base;
    }
    case MassFamily::gaussian: {
        const double s = dist.sigma_m;
        return 4.0 * std::exp(-0.5) / (s * s * std::sqrt(2.0 * kPi)) * dist.norm_const;
    }
    }
    return 0.0;
}

} // namespace qdecay
