#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "qdecay/errors.hpp"
#include "qdecay/mass_distribution.hpp"

namespace qdecay {

enum class QuadMethod {
    closed_form,
    phase_extracted_adaptive,
    filon_grid,
    fft_grid,
    riemann_oracle,
};

/// One evaluation of the oscillatory transform F(t) = integral of
/// w(m) exp(-i m t) dm together with a certified error estimate.
struct OscillatoryResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    QuadMethod method = QuadMethod::phase_extracted_adaptive;
};

enum class GridSpacing { uniform, log };

struct TimeGrid {
    double t_start = 0;
    double t_stop = 0;
    int n_points = 0;
    GridSpacing spacing = GridSpacing::uniform;

    static TimeGrid uniform(double t_start, double t_stop, int n_points);
    static TimeGrid logspace(double t_start, double t_stop, int n_points);

    Eigen::ArrayXd times() const;
};

struct QuadratureOptions {
    double abs_tol = 1e-9;         ///< absolute tolerance per point
    long max_evaluations = 1000000; ///< per-point integrand budget
    bool force_numeric = false;    ///< bypass closed forms (testing)
};

/// F(t) for t >= 0. Uses the closed form when the family admits one,
/// otherwise extracts the carrier exp(-i M t) and integrates the envelope
/// adaptively with analytic tail corrections.
/// Throws QuadratureNonConvergenceError when the budget is exhausted.
OscillatoryResult fourier_point(const MassDistribution& w, double t, const QuadratureOptions& opt = {});

/// Batch evaluation, one result per grid point.
std::vector<OscillatoryResult> fourier_grid(const MassDistribution& w, const TimeGrid& grid,
                                            const QuadratureOptions& opt = {});

/// FFT fast path for uniform grids: midpoint discretization of w on a mass
/// lattice, transformed in one pass. The discretization and windowing
/// bounds are folded into every abs_error_estimate, so the results always
/// agree with the pointwise path within combined estimates (the estimates
/// are simply much larger for heavy-tailed families).
std::vector<OscillatoryResult> fourier_grid_fft(const MassDistribution& w, const TimeGrid& grid,
                                                const QuadratureOptions& opt = {});

/// Deliberately simple cross-check: midpoint Riemann sum over a support
/// window with one step-halving refinement. Reports its own convergence
/// and window bounds; never throws.
OscillatoryResult riemann_oracle(const MassDistribution& w, double t, long n);

namespace detail {

/// F(t) for any real t using conjugate symmetry, F(-t) = conj(F(t)).
OscillatoryResult fourier_point_signed(const MassDistribution& w, double t, const QuadratureOptions& opt = {});

/// Tail piece handled analytically: explicit value plus remainder bound.
struct TailPart {
    std::complex<double> value{0.0, 0.0};
    double bound = 0.0;
};

/// Adaptive segmented Gauss-Kronrod evaluation of
///   integral over [lo, hi] of env(u) exp(-i u t) du.
/// Panels are pre-split so no panel spans more than ~pi of phase.
struct OscillatoryCore {
    std::function<double(double)> envelope;
    double lo = 0;
    double hi = 0;
    std::vector<double> seeds; ///< extra breakpoints (peak scales, kinks)
};

struct CoreResult {
    std::complex<double> value{0.0, 0.0};
    double err = 0.0;
    long evaluations = 0;
    bool converged = true;
};

CoreResult integrate_oscillatory(const OscillatoryCore& core, double t, double tol, long budget);

} // namespace detail

} // namespace qdecay
