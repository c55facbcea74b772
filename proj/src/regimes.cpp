#include "qdecay/regimes.hpp"

#include <cmath>

#include "qdecay/wavepacket.hpp"

namespace qdecay {

namespace {

RegimeVerdict classify(double ratio) {
    if (ratio < 0.01) return RegimeVerdict::ok;
    if (ratio < 0.1) return RegimeVerdict::marginal;
    return RegimeVerdict::violated;
}

RegimeVerdict worse(RegimeVerdict a, RegimeVerdict b) { return a > b ? a : b; }

} // namespace

const char* to_string(RegimeVerdict v) {
    switch (v) {
    case RegimeVerdict::ok: return "ok";
    case RegimeVerdict::marginal: return "marginal";
    case RegimeVerdict::violated: return "violated";
    }
    return "?";
}

RegimeReport check_regime(double M, double Gamma, double sigma_p, double v) {
    if (!(M > 0 && Gamma > 0 && sigma_p > 0) || !std::isfinite(M + Gamma + sigma_p))
        throw ValidationError("check_regime: M, Gamma and sigma_p must be positive and finite");
    if (!(v >= 0 && v < 1)) throw ValidationError("check_regime: need 0 <= v < 1");
    RegimeReport r;
    r.ratio_width = Gamma / sigma_p;
    r.ratio_packet = sigma_p / M;
    r.sigma_x = 1.0 / sigma_p;
    r.tau = 1.0 / Gamma;
    r.verdict = worse(classify(r.ratio_width), classify(r.ratio_packet));
    const double g = v * Gamma / (2.0 * sigma_p);
    r.predicted_gap = g * g;
    return r;
}

std::vector<GapScanRow> gap_scan(const MassDistribution& dist, const std::vector<double>& sigma_ps,
                                 double v, const TimeGrid& grid, const QuadratureOptions& opt) {
    if (sigma_ps.empty()) throw ValidationError("gap_scan: need at least one sigma_p");
    const Boost boost = Boost::from_velocity(v);
    std::vector<GapScanRow> rows;
    rows.reserve(sigma_ps.size());
    for (double sp : sigma_ps) {
        const auto scn = WavepacketScenario::make(dist, MomentumPacket::gaussian_packet(sp), boost, 3);
        const SurvivalCurve exact = survival_wavepacket_exact(scn, grid, opt);
        const SurvivalCurve approx = survival_wavepacket_approx(scn, grid, opt);
        GapScanRow row;
        row.sigma_p = sp;
        row.ratio_width = scn.regime.ratio_width;
        row.measured_gap = (exact.values - approx.values).abs().maxCoeff();
        row.predicted_gap = scn.regime.predicted_gap;
        rows.push_back(row);
    }
    return rows;
}

} // namespace qdecay
