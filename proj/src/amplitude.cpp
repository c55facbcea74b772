#include "qdecay/amplitude.hpp"

#include <cmath>

namespace qdecay {

namespace {

SurvivalCurve curve_from_scaled_time(const MassDistribution& w, const TimeGrid& grid, double time_factor,
                                     Treatment tag, const QuadratureOptions& opt) {
    const Eigen::ArrayXd ts = grid.times();
    SurvivalCurve c;
    c.grid = grid;
    c.treatment = tag;
    c.values.resize(ts.size());
    c.error_estimates.resize(ts.size());
    for (Eigen::Index i = 0; i < ts.size(); ++i) {
        const OscillatoryResult r = fourier_point(w, time_factor * ts[i], opt);
        const double mag = std::abs(r.value);
        c.values[i] = mag * mag;
        c.error_estimates[i] = 2.0 * mag * r.abs_error_estimate + r.abs_error_estimate * r.abs_error_estimate;
    }
    return c;
}

} // namespace

Boost Boost::from_velocity(double v) {
    if (!(v >= 0.0 && v < 1.0) || !std::isfinite(v))
        throw ValidationError("Boost: speed must satisfy 0 <= v < 1");
    Boost b;
    b.v = v;
    b.gamma = 1.0 / std::sqrt((1.0 - v) * (1.0 + v));
    return b;
}

SurvivalCurve survival_rest(const MassDistribution& w, const TimeGrid& grid, const QuadratureOptions& opt) {
    return curve_from_scaled_time(w, grid, 1.0, Treatment::rest, opt);
}

SurvivalCurve survival_naive_boost(const MassDistribution& w, const Boost& boost, const TimeGrid& grid,
                                   const QuadratureOptions& opt) {
    return curve_from_scaled_time(w, grid, boost.gamma, Treatment::naive_boost, opt);
}

SurvivalCurve survival_heuristic(const MassDistribution& w, const Boost& boost, const TimeGrid& grid,
                                 const QuadratureOptions& opt) {
    return curve_from_scaled_time(w, grid, 1.0 / boost.gamma, Treatment::heuristic_spacetime, opt);
}

std::complex<double> spacetime_amplitude(const MassDistribution& w, const Boost& boost, double t,
                                         double x_parallel, const QuadratureOptions& opt) {
    const double tau = boost.gamma * (t - boost.v * x_parallel);
    return detail::fourier_point_signed(w, tau, opt).value;
}

} // namespace qdecay
