#include "qdecay/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace qdecay {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = 2.220446049250313e-16;

// Gauss-Kronrod 7-15 pair on [-1, 1]; abscissae given for the
// nonnegative half, the rule is symmetric.
constexpr int kNK = 8;
constexpr double kKX[kNK] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKW[kNK] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

// No panel may span more than this much phase, so the embedded error
// estimate stays reliable for oscillatory integrands.
constexpr double kMaxPanelPhase = kPi;

struct Panel {
    double a = 0, b = 0;
    cplx value{0.0, 0.0};
    double err = 0;
};

Panel eval_panel(const std::function<double(double)>& env, double a, double b, double t) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cplx acc_k{0.0, 0.0}, acc_g{0.0, 0.0};
    {
        const double e = env(mid);
        const cplx ph = std::polar(e, -mid * t);
        acc_k += kKW[7] * ph;
        acc_g += kGW[3] * ph;
    }
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKX[i];
        const double u1 = mid - dx, u2 = mid + dx;
        const cplx s = std::polar(env(u1), -u1 * t) + std::polar(env(u2), -u2 * t);
        acc_k += kKW[i] * s;
        if (i % 2 == 1) acc_g += kGW[i / 2] * s;
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = acc_k * half;
    p.err = std::abs(acc_k - acc_g) * half + 50.0 * kEps * std::abs(p.value);
    return p;
}

} // namespace

namespace detail {

CoreResult integrate_oscillatory(const OscillatoryCore& core, double t, double tol, long budget) {
    CoreResult out;
    if (!(core.hi > core.lo)) return out;

    std::vector<double> cuts;
    cuts.push_back(core.lo);
    cuts.push_back(core.hi);
    for (double s : core.seeds)
        if (s > core.lo && s < core.hi) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // pre-split so each panel spans at most kMaxPanelPhase of e^{-iut}
    const double at = std::abs(t);
    std::vector<Panel> panels;
    long count = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double w = cuts[i + 1] - cuts[i];
        long nsub = 1;
        if (at > 0) {
            const double need = w * at / kMaxPanelPhase;
            if (need > 1.0) nsub = static_cast<long>(std::ceil(need));
        }
        count += nsub;
        if (15 * count > budget) {
            out.converged = false;
            out.err = std::numeric_limits<double>::infinity();
            return out;
        }
        for (long k = 0; k < nsub; ++k)
            panels.push_back({cuts[i] + w * double(k) / double(nsub),
                              cuts[i] + w * double(k + 1) / double(nsub)});
    }

    long evals = 0;
    for (auto& p : panels) {
        p = eval_panel(core.envelope, p.a, p.b, t);
        evals += 15;
    }

    using Entry = std::pair<double, size_t>;
    std::priority_queue<Entry> heap;
    for (size_t i = 0; i < panels.size(); ++i) heap.push({panels[i].err, i});

    auto total_err = [&panels]() {
        double e = 0;
        for (const auto& p : panels) e += p.err;
        return e;
    };

    double err_sum = total_err();
    while (err_sum > tol && evals + 30 <= budget && !heap.empty()) {
        auto [e, idx] = heap.top();
        heap.pop();
        if (e != panels[idx].err) continue; // stale heap entry
        Panel& worst = panels[idx];
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) continue; // cannot split further
        const Panel left = eval_panel(core.envelope, worst.a, mid, t);
        const Panel right = eval_panel(core.envelope, mid, worst.b, t);
        evals += 30;
        err_sum += left.err + right.err - worst.err;
        worst = left;
        heap.push({worst.err, idx});
        panels.push_back(right);
        heap.push({right.err, panels.size() - 1});
    }

    cplx val{0.0, 0.0};
    double err = 0;
    for (const auto& p : panels) {
        val += p.value;
        err += p.err;
    }
    out.value = val;
    out.err = err;
    out.evaluations = evals;
    out.converged = err <= tol;
    return out;
}

} // namespace detail

namespace {

// ---- analytic machinery for Lorentzian-type envelopes -------------------

// env(u) = c / (u^2 + a^2), written via its complex poles at u = ±ia.
struct LorentzEnvelope {
    double c = 0, a = 0;

    cplx deriv(int j, double u) const {
        const cplx zm = std::pow(cplx(u, -a), double(-(j + 1)));
        const cplx zp = std::pow(cplx(u, a), double(-(j + 1)));
        const double fj = (j % 2 == 0 ? 1.0 : -1.0) * std::tgamma(double(j + 1));
        return c / cplx(0.0, 2.0 * a) * fj * (zm - zp);
    }

    // integral over [U, inf) of |d^k env| is bounded by (c/a) k! / (k U^k)
    double remainder_bound(int k, double u_min, double t) const {
        return (c / a) * std::tgamma(double(k)) / std::pow(u_min * t, double(k));
    }
};

// Repeated integration by parts of  integral over [A, B] of env(u) e^{-iut} du
// for a segment lying entirely on one side of the peak. B may be +inf.
// I = sum_{j<k} (-1)^j (-it)^{-(j+1)} [env^{(j)}(u) e^{-iut}]_A^B + R_k.
detail::TailPart ibp_lorentz(const LorentzEnvelope& env, double A, double B, double t, double target) {
    const bool upper_inf = std::isinf(B);
    const double u_min = upper_inf ? std::abs(A) : std::min(std::abs(A), std::abs(B));

    int best_k = 1;
    double best_bound = env.remainder_bound(1, u_min, t);
    for (int k = 2; k <= 12; ++k) {
        const double b = env.remainder_bound(k, u_min, t);
        if (b < best_bound) {
            best_bound = b;
            best_k = k;
        }
        if (b < target) break;
    }

    const cplx mit = cplx(0.0, -t); // -i t
    cplx coef = 1.0 / mit;          // (-it)^{-1}
    cplx sum{0.0, 0.0};
    const cplx eA = std::polar(1.0, -A * t);
    const cplx eB = upper_inf ? cplx(0.0, 0.0) : std::polar(1.0, -B * t);
    for (int j = 0; j < best_k; ++j) {
        const cplx endA = env.deriv(j, A) * eA;
        const cplx endB = upper_inf ? cplx(0.0, 0.0) : env.deriv(j, B) * eB;
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * coef * (endB - endA);
        coef /= mit;
    }
    return {sum, best_bound};
}

LorentzEnvelope lorentz_envelope(const MassDistribution& w) {
    const double a = 0.5 * w.Gamma;
    return {w.norm_const * w.Gamma / (2.0 * kPi), a};
}

std::vector<double> peak_seeds(double scale, double lo, double hi) {
    std::vector<double> s;
    s.push_back(0.0);
    for (double r = scale / 8.0; r < std::max(std::abs(lo), std::abs(hi)); r *= 2.0) {
        s.push_back(r);
        s.push_back(-r);
    }
    return s;
}

struct Assembled {
    cplx envelope_integral{0.0, 0.0};
    double err = 0;
    long evals = 0;
    bool converged = true;
};

// integral of pdf(M + u) e^{-iut} du over the full support, with analytic
// tail handling per family; t >= 0.
Assembled envelope_fourier(const MassDistribution& w, double t, const QuadratureOptions& opt) {
    Assembled out;
    const double scale = width_scale(w);
    const auto env = [&w](double u) { return pdf(w, w.M + u); };
    const double u_th = w.m_threshold - w.M; // meaningful for truncated only
    const bool truncated = w.family == MassFamily::breit_wigner_truncated;
    const bool gaussian = w.family == MassFamily::gaussian;

    detail::OscillatoryCore core;
    core.envelope = env;
    std::vector<detail::TailPart> tails;

    if (gaussian) {
        // window carries all but ~1e-17 of the mass; no analytic tails needed
        const double R = mass_window_radius(w, 1e-16);
        core.lo = -R;
        core.hi = R;
        tails.push_back({cplx(0.0, 0.0), 2e-16});
        if (t * w.sigma_m > 60.0) {
            // |F| < 1e-780; skip the cancellation-dominated quadrature
            out.envelope_integral = 0.0;
            out.err = 1e-300;
            return out;
        }
    } else if (t == 0.0) {
        // non-oscillatory: small core plus exact tail masses
        const double U = 8.0 * scale;
        core.lo = truncated ? std::max(u_th, -U) : -U;
        core.hi = U;
        tails.push_back({cplx(mass_above(w, w.M + U), 0.0), 4.0 * kEps});
        if (!truncated) {
            tails.push_back({cplx(mass_below(w, w.M - U), 0.0), 4.0 * kEps});
        } else if (u_th < -U) {
            tails.push_back({cplx(mass_between(w, w.m_threshold, w.M - U), 0.0), 4.0 * kEps});
        }
    } else {
        const LorentzEnvelope le = lorentz_envelope(w);
        double U = std::max(8.0 * scale, 60.0 / t);
        // grow the window until the integration-by-parts remainders clear
        // a slice of the tolerance
        detail::TailPart upper = ibp_lorentz(le, U, std::numeric_limits<double>::infinity(), t, 0.125 * opt.abs_tol);
        for (int grow = 0; grow < 40 && upper.bound > 0.125 * opt.abs_tol; ++grow) {
            U *= 2.0;
            upper = ibp_lorentz(le, U, std::numeric_limits<double>::infinity(), t, 0.125 * opt.abs_tol);
        }
        core.hi = U;
        tails.push_back(upper);
        if (!truncated) {
            core.lo = -U;
            // even envelope: the lower tail is the conjugate of the upper one
            tails.push_back({std::conj(upper.value), upper.bound});
        } else if (u_th >= -U) {
            core.lo = u_th;
        } else {
            core.lo = -U;
            tails.push_back(ibp_lorentz(le, u_th, -U, t, 0.125 * opt.abs_tol));
        }
    }

    core.seeds = peak_seeds(scale, core.lo, core.hi);

    double tail_err = 0;
    cplx tail_val{0.0, 0.0};
    for (const auto& tp : tails) {
        tail_val += tp.value;
        tail_err += tp.bound;
    }

    const double core_tol = std::max(opt.abs_tol - tail_err, 0.25 * opt.abs_tol);
    const detail::CoreResult cr = detail::integrate_oscillatory(core, t, core_tol, opt.max_evaluations);

    out.envelope_integral = cr.value + tail_val;
    out.err = cr.err + tail_err;
    out.evals = cr.evaluations;
    out.converged = cr.converged && std::isfinite(out.err);
    return out;
}

} // namespace

namespace detail {

OscillatoryResult fourier_point_signed(const MassDistribution& w, double t, const QuadratureOptions& opt) {
    OscillatoryResult r;
    if (!opt.force_numeric) {
        switch (w.family) {
        case MassFamily::breit_wigner_full_line:
            r.value = std::polar(std::exp(-0.5 * w.Gamma * std::abs(t)), -w.M * t);
            r.abs_error_estimate = 8.0 * kEps * std::abs(r.value) + 1e-300;
            r.method = QuadMethod::closed_form;
            return r;
        case MassFamily::gaussian: {
            const double st = w.sigma_m * t;
            const double mag = st * st > 1400.0 ? 0.0 : std::exp(-0.5 * st * st);
            r.value = std::polar(mag, -w.M * t);
            r.abs_error_estimate = 8.0 * kEps * mag + 1e-300;
            r.method = QuadMethod::closed_form;
            return r;
        }
        case MassFamily::breit_wigner_truncated:
            break; // no closed form
        }
    }

    const double at = std::abs(t);
    const Assembled a = envelope_fourier(w, at, opt);
    if (!a.converged || a.err > 2.0 * opt.abs_tol) {
        throw QuadratureNonConvergenceError(
            "fourier_point: tolerance not reached within the evaluation budget", t, a.err, opt.abs_tol);
    }
    cplx val = a.envelope_integral * std::polar(1.0, -w.M * at);
    if (t < 0) val = std::conj(val);
    r.value = val;
    r.abs_error_estimate = a.err;
    r.evaluations = a.evals;
    r.method = QuadMethod::phase_extracted_adaptive;
    return r;
}

} // namespace detail

OscillatoryResult fourier_point(const MassDistribution& w, double t, const QuadratureOptions& opt) {
    if (!(t >= 0) || !std::isfinite(t)) throw ValidationError("fourier_point: t must be finite and nonnegative");
    return detail::fourier_point_signed(w, t, opt);
}

// ---- time grids ----------------------------------------------------------

TimeGrid TimeGrid::uniform(double t_start, double t_stop, int n_points) {
    if (!(t_start >= 0) || !(t_stop > t_start) || n_points < 2)
        throw ValidationError("TimeGrid: need 0 <= t_start < t_stop and n_points >= 2");
    return {t_start, t_stop, n_points, GridSpacing::uniform};
}

TimeGrid TimeGrid::logspace(double t_start, double t_stop, int n_points) {
    if (!(t_start > 0) || !(t_stop > t_start) || n_points < 2)
        throw ValidationError("TimeGrid: log spacing needs 0 < t_start < t_stop and n_points >= 2");
    return {t_start, t_stop, n_points, GridSpacing::log};
}

Eigen::ArrayXd TimeGrid::times() const {
    Eigen::ArrayXd t(n_points);
    if (spacing == GridSpacing::uniform) {
        t = Eigen::ArrayXd::LinSpaced(n_points, t_start, t_stop);
    } else {
        t = Eigen::ArrayXd::LinSpaced(n_points, std::log(t_start), std::log(t_stop)).exp();
        t(0) = t_start;
        t(n_points - 1) = t_stop;
    }
    return t;
}

std::vector<OscillatoryResult> fourier_grid(const MassDistribution& w, const TimeGrid& grid,
                                            const QuadratureOptions& opt) {
    const Eigen::ArrayXd ts = grid.times();
    std::vector<OscillatoryResult> out(ts.size());
    for (Eigen::Index i = 0; i < ts.size(); ++i) out[i] = fourier_point(w, ts[i], opt);
    return out;
}

// ---- FFT fast path --------------------------------------------------------

std::vector<OscillatoryResult> fourier_grid_fft(const MassDistribution& w, const TimeGrid& grid,
                                                const QuadratureOptions& opt) {
    if (grid.spacing != GridSpacing::uniform)
        throw ValidationError("fourier_grid_fft: uniform grids only");
    const Eigen::ArrayXd ts = grid.times();
    const int n = grid.n_points;
    const double dt = (grid.t_stop - grid.t_start) / (n - 1);
    const double t_max = std::max(std::abs(grid.t_start), std::abs(grid.t_stop));

    const double R = std::min(mass_window_radius(w, 1e-12), 1e9 * width_scale(w));
    double lo = w.M - R, hi = w.M + R;
    if (w.family == MassFamily::breit_wigner_truncated) lo = std::max(lo, w.m_threshold);
    const double clipped = mass_above(w, hi) + (w.family == MassFamily::breit_wigner_truncated
                                                    ? 0.0
                                                    : mass_below(w, lo));

    double h_target = width_scale(w) / 16.0;
    if (t_max > 0) h_target = std::min(h_target, (kPi / 8.0) / t_max);
    long N = 1;
    const double n_for_h = 2.0 * kPi / (dt * h_target);
    while (N < n || double(N) < std::min(n_for_h, 4.2e6)) N <<= 1;
    const double h = 2.0 * kPi / (double(N) * dt);

    long K = static_cast<long>(std::ceil((hi - lo) / h));
    const long K_cap = 1L << 24;
    double h_eff = h;
    long fold = 1;
    if (K > K_cap) {
        // coarsen by an integer factor so the lattice stays commensurate
        fold = (K + K_cap - 1) / K_cap;
        h_eff = h * double(fold);
        K = static_cast<long>(std::ceil((hi - lo) / h_eff));
    }

    std::vector<cplx> acc(static_cast<size_t>(N), cplx(0.0, 0.0));
    for (long k = 0; k < K; ++k) {
        const double m = lo + (double(k) + 0.5) * h_eff;
        const cplx c = std::polar(h_eff * pdf(w, m), -m * grid.t_start);
        // alias exactly onto the DFT lattice (h_eff = fold * h)
        acc[static_cast<size_t>((k * fold) % N)] += c;
    }

    Eigen::FFT<double> fft;
    std::vector<cplx> spectrum;
    fft.fwd(spectrum, acc);

    const double tv = total_variation(w);
    const double tv2 = second_variation(w);
    std::vector<OscillatoryResult> out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double tj = ts[j];
        const double jdt = double(j) * dt;
        OscillatoryResult r;
        r.value = spectrum[static_cast<size_t>(j)] * std::polar(1.0, -(lo + 0.5 * h_eff) * jdt);
        r.abs_error_estimate = clipped + (h_eff * h_eff / 24.0) * (tj * tj + 2.0 * std::abs(tj) * tv + tv2);
        r.evaluations = K;
        r.method = QuadMethod::fft_grid;
        out[static_cast<size_t>(j)] = r;
    }
    (void)opt;
    return out;
}

// ---- midpoint oracle -------------------------------------------------------

OscillatoryResult riemann_oracle(const MassDistribution& w, double t, long n) {
    n = std::max<long>(n, 16);
    n -= n % 2;

    double lo, hi, tail_bound;
    if (w.family == MassFamily::gaussian) {
        const double R = mass_window_radius(w, 1e-12);
        lo = w.M - R;
        hi = w.M + R;
        tail_bound = 1e-12;
    } else {
        // balance window clipping against midpoint resolution for the
        // given budget; the Lorentzian tail behaves like c/u^2
        const double c = w.norm_const * w.Gamma / (2.0 * kPi);
        const double at = std::abs(t);
        const double d4 = std::pow(at, 4) + 4.0 * std::pow(at, 3) * total_variation(w) + second_variation(w);
        double R;
        if (at * width_scale(w) > 1e-6) {
            R = std::pow(2.0 * c * std::pow(double(n), 4) * 2880.0 / (16.0 * std::max(d4, 1e-30) * at), 1.0 / 6.0);
            tail_bound = 4.0 * c / (R * R * at);
        } else {
            R = std::cbrt(6.0 * c * double(n) * double(n) / std::max(second_variation(w), 1e-30));
            tail_bound = 4.0 * c / R;
        }
        R = std::max(R, 64.0 * width_scale(w));
        R = std::min(R, mass_window_radius(w, 1e-12));
        lo = w.M - R;
        hi = w.M + R;
        if (w.family == MassFamily::breit_wigner_truncated) lo = std::max(lo, w.m_threshold);
        tail_bound = std::min(tail_bound, mass_above(w, hi) + mass_between(w, -1e308, lo));
    }

    auto midpoint_sum = [&](long nn) {
        const double h = (hi - lo) / double(nn);
        cplx s{0.0, 0.0};
        for (long k = 0; k < nn; ++k) {
            const double m = lo + (double(k) + 0.5) * h;
            s += std::polar(pdf(w, m), -m * t);
        }
        return s * h;
    };

    const cplx coarse = midpoint_sum(n / 2);
    const cplx fine = midpoint_sum(n);
    const cplx value = (4.0 * fine - coarse) / 3.0;

    OscillatoryResult r;
    r.value = value;
    r.abs_error_estimate = std::abs(fine - coarse) + tail_bound + 50.0 * kEps;
    r.evaluations = n + n / 2;
    r.method = QuadMethod::riemann_oracle;
    return r;
}

} // namespace qdecay
