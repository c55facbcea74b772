#include "qdecay/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdecay {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double gaussian_kernel(double phi, double x) {
    const double z = phi * x;
    return z * z > 1400.0 ? 0.0 : std::exp(-z * z);
}

// width scale of the autocorrelation C
double autocorr_scale(const MassDistribution& w) {
    return w.family == MassFamily::gaussian ? std::sqrt(2.0) * w.sigma_m : w.Gamma;
}

// upper bound on the mass of C beyond u (exact for the full line)
double autocorr_tail_mass(const MassDistribution& w, double u) {
    if (w.family == MassFamily::gaussian)
        return 0.5 * std::erfc(u / (2.0 * w.sigma_m));
    return w.norm_const * w.norm_const * std::atan2(w.Gamma, u) / kPi;
}

double autocorr_derivative(const MassDistribution& w, double delta) {
    switch (w.family) {
    case MassFamily::breit_wigner_full_line: {
        const double G = w.Gamma;
        const double d2 = delta * delta + G * G;
        return -2.0 * delta * (G / kPi) / (d2 * d2);
    }
    case MassFamily::gaussian: {
        const double s2 = 2.0 * w.sigma_m * w.sigma_m; // variance of C
        return -delta / s2 * detail::mass_autocorrelation(w, delta);
    }
    case MassFamily::breit_wigner_truncated: {
        const double h = std::max(1e-4 * delta, 1e-3 * w.Gamma);
        return (detail::mass_autocorrelation(w, delta + h) - detail::mass_autocorrelation(w, delta - h)) /
               (2.0 * h);
    }
    }
    return 0.0;
}

} // namespace

MomentumPacket MomentumPacket::gaussian_packet(double sigma_p) {
    if (!(std::isfinite(sigma_p) && sigma_p > 0))
        throw ValidationError("MomentumPacket: sigma_p must be positive and finite");
    return {sigma_p, PacketShape::gaussian};
}

WavepacketScenario WavepacketScenario::make(MassDistribution dist, MomentumPacket packet, Boost boost,
                                            int dimension) {
    if (dimension != 1 && dimension != 3)
        throw ValidationError("WavepacketScenario: dimension must be 1 or 3");
    WavepacketScenario s;
    s.dist = normalize(std::move(dist));
    s.packet = packet;
    s.boost = boost;
    s.dimension = dimension;
    s.regime = check_regime(s.dist.M, s.dist.Gamma, packet.sigma_p, boost.v);
    return s;
}

LorentzMapped lorentz_map(double m, double p_parallel, const Eigen::Vector2d& p_perp, const Boost& boost,
                          bool approximate) {
    if (!(m > 0)) throw ValidationError("lorentz_map: m must be positive");
    const double E_rest =
        approximate ? m : std::sqrt(m * m + p_parallel * p_parallel + p_perp.squaredNorm());
    LorentzMapped out;
    out.E = boost.gamma * (E_rest + boost.v * p_parallel);
    out.k_parallel = boost.gamma * (p_parallel + boost.v * E_rest);
    out.k_perp = p_perp;
    return out;
}

double overlap_factor(const MomentumPacket& packet, double delta, int dimension) {
    if (packet.shape != PacketShape::gaussian)
        throw UnsupportedShapeError("overlap_factor: only the gaussian shape has a closed overlap");
    if (dimension != 1 && dimension != 3)
        throw ValidationError("overlap_factor: dimension must be 1 or 3");
    const double s2 = packet.sigma_p * packet.sigma_p;
    const double arg = delta * delta / (4.0 * s2);
    const double mag = arg > 1400.0 ? 0.0 : std::exp(-arg);
    return std::pow(4.0 * kPi * s2, -0.5 * dimension) * mag;
}

namespace detail {

double mass_autocorrelation(const MassDistribution& w, double delta) {
    const double d = std::abs(delta);
    switch (w.family) {
    case MassFamily::breit_wigner_full_line: {
        const double G = w.Gamma;
        return (G / kPi) / (d * d + G * G);
    }
    case MassFamily::gaussian: {
        const double s = w.sigma_m;
        return std::exp(-d * d / (4.0 * s * s)) / (2.0 * s * std::sqrt(kPi));
    }
    case MassFamily::breit_wigner_truncated:
        break;
    }

    // truncated: numeric overlap of the density with its shifted copy
    const double lo = w.m_threshold + d;
    const double a = 0.5 * w.Gamma;
    const double peak_hi = w.M + d;
    double R = 8.0 * a;
    const double tolC = 1e-12 * pdf(w, w.M);
    for (int i = 0; i < 60; ++i) {
        const double X = peak_hi + R;
        if (pdf(w, X - d) * mass_above(w, X) <= 0.5 * tolC || R > 1e12 * a) break;
        R *= 2.0;
    }
    const double hi = peak_hi + R;
    if (hi <= lo) return 0.0;

    detail::OscillatoryCore core;
    core.envelope = [&w, d](double m) { return pdf(w, m) * pdf(w, m - d); };
    core.lo = lo;
    core.hi = hi;
    for (double center : {w.M, w.M + d})
        for (double r = a / 8.0; r < hi - lo; r *= 2.0) {
            core.seeds.push_back(center - r);
            core.seeds.push_back(center + r);
        }
    const detail::CoreResult cr = detail::integrate_oscillatory(core, 0.0, tolC, 60000);
    return cr.value.real() + pdf(w, hi - d) * mass_above(w, hi); // tail as explicit estimate
}

DeltaIntegral wavepacket_double_mass(const MassDistribution& w, double phi, double s,
                                     const QuadratureOptions& opt) {
    s = std::abs(s);
    const double wC = autocorr_scale(w);
    const double tail_slice = 0.125 * opt.abs_tol;

    auto K = [&w, phi](double d) { return mass_autocorrelation(w, d) * gaussian_kernel(phi, d); };

    // window selection: either the Gaussian kernel has killed the
    // envelope (mass bound) or two integration-by-parts terms with a
    // |K'(U)|/s^2 remainder certify the rest. The IBP remainder needs the
    // kernel convex beyond U, hence the eligibility floor.
    const double ibp_floor = std::max(2.0 * wC, phi > 0 ? 1.5 / phi : 0.0);
    double U = std::max(4.0 * wC, s > 0 ? 60.0 / s : 0.0);
    cplx tail_value{0.0, 0.0};
    double tail_bound = kInf;
    for (int iter = 0; iter < 60; ++iter) {
        const double bound_mass = gaussian_kernel(phi, U) * autocorr_tail_mass(w, U);
        double bound_ibp = kInf;
        cplx ibp_value{0.0, 0.0};
        if (s > 0 && U >= ibp_floor) {
            const double KU = K(U);
            const double KpU = autocorr_derivative(w, U) * gaussian_kernel(phi, U) +
                               mass_autocorrelation(w, U) * (-2.0 * phi * phi * U) * gaussian_kernel(phi, U);
            const cplx mis(0.0, -s);
            const cplx E = std::polar(1.0, -U * s);
            ibp_value = (-KU / mis + KpU / (mis * mis)) * E;
            bound_ibp = 2.0 * std::abs(KpU) / (s * s);
        }
        if (bound_mass <= tail_slice || bound_ibp <= tail_slice) {
            if (bound_mass <= bound_ibp) {
                tail_value = cplx(0.0, 0.0);
                tail_bound = bound_mass;
            } else {
                tail_value = ibp_value;
                tail_bound = bound_ibp;
            }
            break;
        }
        tail_bound = std::min(bound_mass, bound_ibp);
        U *= 2.0;
    }

    detail::OscillatoryCore core;
    core.envelope = K;
    core.lo = 0.0;
    core.hi = U;
    for (double r = wC / 8.0; r < U; r *= 2.0) core.seeds.push_back(r);
    if (phi > 0)
        for (double r = 0.125 / phi; r < U; r *= 2.0) core.seeds.push_back(r);

    const double core_tol = std::max(0.5 * opt.abs_tol - tail_bound, 0.125 * opt.abs_tol);
    const detail::CoreResult cr = detail::integrate_oscillatory(core, s, core_tol, opt.max_evaluations);

    DeltaIntegral out;
    out.value = 2.0 * (cr.value + tail_value).real();
    out.err = 2.0 * (cr.err + tail_bound);
    if (w.family == MassFamily::breit_wigner_truncated)
        out.err += 2.0 * U * 1e-12 * pdf(w, w.M); // inner autocorrelation tolerance
    out.evaluations = cr.evaluations;
    if (!cr.converged || !std::isfinite(out.err))
        throw QuadratureNonConvergenceError(
            "wavepacket double-mass integral: tolerance not reached within the budget", s, out.err,
            opt.abs_tol);
    return out;
}

} // namespace detail

SurvivalCurve survival_wavepacket_exact(const WavepacketScenario& scn, const TimeGrid& grid,
                                        const QuadratureOptions& opt) {
    if (scn.packet.shape != PacketShape::gaussian)
        throw UnsupportedShapeError("survival_wavepacket_exact: only gaussian packets supported");
    const double phi = scn.boost.v / (2.0 * scn.packet.sigma_p);
    const Eigen::ArrayXd ts = grid.times();

    const detail::DeltaIntegral n0 = detail::wavepacket_double_mass(scn.dist, phi, 0.0, opt);

    SurvivalCurve c;
    c.grid = grid;
    c.treatment = Treatment::wavepacket_exact;
    c.values.resize(ts.size());
    c.error_estimates.resize(ts.size());
    for (Eigen::Index i = 0; i < ts.size(); ++i) {
        if (ts[i] == 0.0) {
            c.values[i] = 1.0;
            c.error_estimates[i] = 2.0 * n0.err / std::abs(n0.value);
            continue;
        }
        const double s = ts[i] / scn.boost.gamma;
        const detail::DeltaIntegral n = detail::wavepacket_double_mass(scn.dist, phi, s, opt);
        c.values[i] = n.value / n0.value;
        c.error_estimates[i] = (n.err + std::abs(c.values[i]) * n0.err) / std::abs(n0.value);
    }
    return c;
}

SurvivalCurve survival_wavepacket_approx(const WavepacketScenario& scn, const TimeGrid& grid,
                                         const QuadratureOptions& opt) {
    if (scn.packet.shape != PacketShape::gaussian)
        throw UnsupportedShapeError("survival_wavepacket_approx: only gaussian packets supported");
    const Eigen::ArrayXd ts = grid.times();
    SurvivalCurve c;
    c.grid = grid;
    c.treatment = Treatment::wavepacket_approx;
    c.values.resize(ts.size());
    c.error_estimates.resize(ts.size());
    for (Eigen::Index i = 0; i < ts.size(); ++i) {
        const OscillatoryResult r = fourier_point(scn.dist, ts[i] / scn.boost.gamma, opt);
        const double mag = std::abs(r.value);
        c.values[i] = mag * mag;
        c.error_estimates[i] = 2.0 * mag * r.abs_error_estimate + r.abs_error_estimate * r.abs_error_estimate;
    }
    return c;
}

// ---- spatial oracle --------------------------------------------------------

namespace {

// composite panel quadrature of pdf(m) e^{-i m tau} over a window chosen
// from the mass and oscillatory tail targets
cplx oracle_mass_sum(const MassDistribution& w, double tau, const SpatialGridSpec& spec) {
    double W;
    if (w.family == MassFamily::gaussian) {
        W = mass_window_radius(w, 1e-12);
    } else {
        const double a = 0.5 * w.Gamma;
        const double c = w.norm_const * w.Gamma / (2.0 * kPi);
        const double w_mass = mass_window_radius(w, spec.mass_tail_target);
        const double at = std::abs(tau);
        const double w_osc =
            at > 0 ? std::sqrt(2.0 * c / (spec.osc_tail_target * at)) : kInf;
        W = std::max(64.0 * a, std::min(w_mass, w_osc));
    }
    detail::OscillatoryCore core;
    core.envelope = [&w](double u) { return pdf(w, w.M + u); };
    core.lo = std::max(w.support_lower() - w.M, -W);
    core.hi = W;
    core.seeds = [&] {
        std::vector<double> s{0.0};
        for (double r = width_scale(w) / 8.0; r < W; r *= 2.0) {
            s.push_back(r);
            s.push_back(-r);
        }
        return s;
    }();
    const detail::CoreResult cr = detail::integrate_oscillatory(core, tau, 1e-10, 400000);
    return cr.value * std::polar(1.0, -w.M * tau);
}

cplx oracle_packet_sum(double sigma_p, double y) {
    const double R = 8.8 * sigma_p;
    detail::OscillatoryCore core;
    core.envelope = [sigma_p](double p) {
        const double z = p / sigma_p;
        return std::exp(-0.5 * z * z) / (sigma_p * std::sqrt(2.0 * kPi));
    };
    core.lo = -R;
    core.hi = R;
    core.seeds = {0.0, -sigma_p, sigma_p, -2.0 * sigma_p, 2.0 * sigma_p, -4.0 * sigma_p, 4.0 * sigma_p};
    // e^{+ipy} = conj(e^{-ipy}) with a real envelope
    const detail::CoreResult cr = detail::integrate_oscillatory(core, y, 1e-12, 60000);
    return std::conj(cr.value);
}

struct SpatialIntensity {
    double integral = 0;
    double edge_fraction = 0;
};

SpatialIntensity spatial_intensity(const WavepacketScenario& scn, double t, const SpatialGridSpec& spec) {
    const double v = scn.boost.v;
    const double gamma = scn.boost.gamma;
    const double sp = scn.packet.sigma_p;

    int n = std::max(spec.n_x, 41);
    if (n % 2 == 0) ++n;
    const double xc = v * t;
    const double hw = spec.half_width_sigmas / (sp * gamma);
    const double h = 2.0 * hw / double(n - 1);

    Eigen::ArrayXd f(n);
    for (int i = 0; i < n; ++i) {
        const double x = xc - hw + double(i) * h;
        const cplx A = oracle_mass_sum(scn.dist, gamma * (t - v * x), spec) *
                       oracle_packet_sum(sp, gamma * (x - v * t));
        f[i] = std::norm(A);
    }

    double simpson = f[0] + f[n - 1];
    for (int i = 1; i < n - 1; ++i) simpson += f[i] * (i % 2 == 1 ? 4.0 : 2.0);
    simpson *= h / 3.0;

    SpatialIntensity out;
    out.integral = simpson;
    out.edge_fraction = std::max(f[0], f[n - 1]) * 2.0 * hw / std::max(simpson, 1e-300);
    return out;
}

} // namespace

double brute_force_spatial(const WavepacketScenario& scn, double t, const SpatialGridSpec& spec) {
    if (scn.dimension != 1)
        throw ValidationError("brute_force_spatial: only dimension 1 is tractable");
    if (!(t >= 0) || !std::isfinite(t))
        throw ValidationError("brute_force_spatial: t must be finite and nonnegative");

    const SpatialIntensity now = spatial_intensity(scn, t, spec);
    const SpatialIntensity start = spatial_intensity(scn, 0.0, spec);
    for (const auto* part : {&now, &start}) {
        if (part->edge_fraction > 1e-8)
            throw GridTooSmallError("brute_force_spatial: |A|^2 leaks past the spatial window");
    }
    return now.integral / start.integral;
}

} // namespace qdecay
