#pragma once

#include <Eigen/Core>

#include "qdecay/amplitude.hpp"
#include "qdecay/regimes.hpp"

namespace qdecay {

enum class PacketShape { gaussian };

/// Isotropic rest-frame momentum distribution |phi(p)|^2 with zero mean
/// and per-axis second moment sigma_p^2.
struct MomentumPacket {
    double sigma_p = 0;
    PacketShape shape = PacketShape::gaussian;

    static MomentumPacket gaussian_packet(double sigma_p);
};

struct WavepacketScenario {
    MassDistribution dist;
    MomentumPacket packet;
    Boost boost;
    int dimension = 3; ///< spatial dimensionality, 1 or 3
    RegimeReport regime;

    /// Computes the regime report on construction; a violated regime is
    /// reported, not rejected.
    static WavepacketScenario make(MassDistribution dist, MomentumPacket packet, Boost boost,
                                   int dimension = 3);
    bool regime_warning() const { return regime.verdict != RegimeVerdict::ok; }
};

struct LorentzMapped {
    double E = 0;
    double k_parallel = 0;
    Eigen::Vector2d k_perp = Eigen::Vector2d::Zero();
};

/// Boost of a mass-m momentum eigenstate: E and the parallel momentum mix,
/// transverse momentum is untouched. With `approximate` set, the rest
/// energy is taken as m (valid when p << m).
LorentzMapped lorentz_map(double m, double p_parallel, const Eigen::Vector2d& p_perp, const Boost& boost,
                          bool approximate = true);

/// Shifted self-overlap of the packet density n = |phi|^2:
///   I(delta) = integral d^d p n(p) n(p + delta e_parallel)
/// Closed form for the Gaussian shape: (4 pi sigma_p^2)^{-d/2} exp(-delta^2 / (4 sigma_p^2)).
/// I(0) is the packet's inverse coherence volume, integral of n^2.
double overlap_factor(const MomentumPacket& packet, double delta, int dimension);

/// Survival probability of the boosted packet from the spatially
/// integrated amplitude: a double mass integral whose kernel is the
/// packet overlap at momentum shift v (m - m'), normalized to 1 at t = 0.
SurvivalCurve survival_wavepacket_exact(const WavepacketScenario& scn, const TimeGrid& grid,
                                        const QuadratureOptions& opt = {});

/// Narrow-width limit: the overlap kernel is frozen at zero shift and the
/// double integral factorizes into |F(t/gamma)|^2.
SurvivalCurve survival_wavepacket_approx(const WavepacketScenario& scn, const TimeGrid& grid,
                                         const QuadratureOptions& opt = {});

struct SpatialGridSpec {
    int n_x = 1201;                ///< spatial sample count (made odd internally)
    double half_width_sigmas = 12; ///< window half-width in units of 1/(sigma_p gamma)
    double mass_tail_target = 1e-5;
    double osc_tail_target = 1e-8;
};

/// Brute-force spatial oracle (dimension 1): tensor quadrature of the
/// boosted amplitude on an x-grid, then |A|^2 integrated over x and
/// normalized by its t = 0 value. Independent of the double-mass
/// reduction used by survival_wavepacket_exact.
/// Throws GridTooSmallError when |A|^2 leaks past the window.
double brute_force_spatial(const WavepacketScenario& scn, double t, const SpatialGridSpec& spec = {});

namespace detail {

struct DeltaIntegral {
    double value = 0;
    double err = 0;
    long evaluations = 0;
};

/// N(s) = integral dm dm' w(m) w(m') exp(-i (m-m') s) q(m-m') with
/// q(x) = exp(-phi^2 x^2), reduced to the mass autocorrelation:
/// N(s) = 2 Re integral_0^inf C(delta) q(delta) exp(-i delta s) d delta.
DeltaIntegral wavepacket_double_mass(const MassDistribution& w, double phi, double s,
                                     const QuadratureOptions& opt);

/// C(delta) = integral w(m) w(m - |delta|) dm.
double mass_autocorrelation(const MassDistribution& w, double delta);

} // namespace detail

} // namespace qdecay
