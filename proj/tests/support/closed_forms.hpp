#pragma once

// Test-side reference computations, kept independent of the library's
// quadrature engine: plain Simpson oracles, scaled complementary error
// function, and the closed survival forms used to pin expected values.

#include <cmath>
#include <complex>
#include <functional>

#include "qdecay/mass_distribution.hpp"

namespace testsupport {

// e^{x^2} erfc(x) without overflow for x >= 0
inline double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic series, relative error < 1e-14 for x >= 25
    const double ix2 = 1.0 / (x * x);
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) / 2.0 * ix2;
        sum += term;
    }
    return sum / (x * std::sqrt(M_PI));
}

// exact survival of a boosted full-line Breit-Wigner wave packet as a
// function of s = t/gamma with phi = v / (2 sigma_p):
// P(s) = [e^{-G s} erfc(a - b) + e^{G s} erfc(a + b)] / (2 erfc(a)),
// a = phi*Gamma, b = s/(2 phi)
inline double wavepacket_exact_bw(double Gamma, double phi, double s) {
    const double a = phi * Gamma;
    const double b = s / (2.0 * phi);
    // second term rewritten through erfcx to avoid overflow:
    // e^{G s} erfc(a+b) = e^{-a^2 - b^2} erfcx(a+b)
    const double t1 = std::exp(-Gamma * s) * std::erfc(a - b);
    const double expo = -a * a - b * b;
    const double t2 = expo < -700.0 ? 0.0 : std::exp(expo) * erfcx(a + b);
    return (t1 + t2) / (2.0 * std::erfc(a));
}

// exact survival of a boosted gaussian-mass wave packet:
// P(s) = exp(-s^2 sigma_m^2 / (1 + 4 phi^2 sigma_m^2))
inline double wavepacket_exact_gauss(double sigma_m, double phi, double s) {
    const double denom = 1.0 + 4.0 * phi * phi * sigma_m * sigma_m;
    return std::exp(-s * s * sigma_m * sigma_m / denom);
}

// composite Simpson on [a, b]; n intervals (forced even)
template <class F>
double simpson(const F& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

template <class F>
std::complex<double> simpson_c(const F& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    std::complex<double> acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

// brute-force mass quadrature of the Fourier transform over an explicit
// window, refined until two successive doublings agree
inline std::complex<double> fourier_by_simpson(const qdecay::MassDistribution& w, double t, double lo,
                                               double hi, int n) {
    const auto f = [&](double m) {
        return std::polar(qdecay::pdf(w, m), -m * t);
    };
    return simpson_c(f, lo, hi, n);
}

} // namespace testsupport
