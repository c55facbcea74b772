#pragma once

#include <complex>

#include <Eigen/Core>

#include "qdecay/mass_distribution.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay {

/// Uniform motion of the decaying system relative to the observer.
struct Boost {
    double v = 0;     ///< speed as a fraction of c
    double gamma = 1; ///< (1 - v^2)^{-1/2}

    static Boost from_velocity(double v);
};

enum class Treatment {
    rest,
    naive_boost,
    heuristic_spacetime,
    wavepacket_exact,
    wavepacket_approx,
};

struct SurvivalCurve {
    TimeGrid grid;
    Eigen::ArrayXd values;
    Eigen::ArrayXd error_estimates;
    Treatment treatment = Treatment::rest;
};

/// Rest-frame survival probability P0(t) = |F(t)|^2.
SurvivalCurve survival_rest(const MassDistribution& w, const TimeGrid& grid,
                            const QuadratureOptions& opt = {});

/// Time-only evolution of the boosted state. The mass integral acquires
/// the phase exp(-i m gamma t), so the curve equals P0(gamma * t): the
/// decay appears *faster*, contradicting time dilation.
SurvivalCurve survival_naive_boost(const MassDistribution& w, const Boost& boost, const TimeGrid& grid,
                                   const QuadratureOptions& opt = {});

/// Space-time evolution evaluated along the trajectory x = v t, which
/// restores the standard dilation P_v(t) = P0(t / gamma).
SurvivalCurve survival_heuristic(const MassDistribution& w, const Boost& boost, const TimeGrid& grid,
                                 const QuadratureOptions& opt = {});

/// General space-time amplitude F(gamma * (t - v * x_parallel)) for a
/// single-momentum boosted state. Reduces to the heuristic amplitude at
/// x_parallel = v t and to the rest amplitude at v = 0.
std::complex<double> spacetime_amplitude(const MassDistribution& w, const Boost& boost, double t,
                                         double x_parallel, const QuadratureOptions& opt = {});

} // namespace qdecay
