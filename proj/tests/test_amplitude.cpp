#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qdecay/amplitude.hpp"
#include "support/closed_forms.hpp"

using namespace qdecay;

namespace {
QuadratureOptions numeric_opts() {
    QuadratureOptions o;
    o.force_numeric = true;
    return o;
}
} // namespace

TEST_CASE("boost bookkeeping") {
    const auto b = Boost::from_velocity(0.6);
    CHECK(b.gamma == doctest::Approx(1.25).epsilon(1e-15));
    for (double v : {0.0, 0.3, 0.9, 0.99, 0.999999}) {
        const auto bb = Boost::from_velocity(v);
        CHECK(std::abs(bb.gamma * std::sqrt((1.0 - v) * (1.0 + v)) - 1.0) < 1e-14);
        CHECK(bb.gamma >= 1.0);
    }
    CHECK_THROWS_AS(Boost::from_velocity(1.0), ValidationError);
    CHECK_THROWS_AS(Boost::from_velocity(-0.1), ValidationError);
}

TEST_CASE("rest-frame survival: exponential law and normalization") {
    const auto bw = MassDistribution::breit_wigner(1.0, 1.0);
    const auto c = survival_rest(bw, TimeGrid::uniform(0.0, 5.0, 6));
    CHECK(c.treatment == Treatment::rest);
    CHECK(c.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.values[1] == doctest::Approx(0.36787944117144233).epsilon(1e-13));
    for (int i = 0; i < 6; ++i) CHECK(c.values[i] == doctest::Approx(std::exp(-double(i))).epsilon(1e-12));
}

TEST_CASE("rest-frame survival for the gaussian family, engine against oracle") {
    const auto g = MassDistribution::gaussian(1.0, 0.1);
    const auto c = survival_rest(g, TimeGrid::uniform(0.0, 1.0, 2), numeric_opts());
    CHECK(c.values[1] == doctest::Approx(0.99004983374916805).epsilon(1e-10));
    const auto o = riemann_oracle(g, 1.0, 200000);
    CHECK(std::norm(o.value) == doctest::Approx(c.values[1]).epsilon(1e-10));
}

TEST_CASE("naive time-only boost shortens the observed life") {
    const auto bw = MassDistribution::breit_wigner(1.0, 1.0);
    const auto b = Boost::from_velocity(0.6);
    const auto c = survival_naive_boost(bw, b, TimeGrid::uniform(0.0, 1.0, 2));
    CHECK(c.treatment == Treatment::naive_boost);
    CHECK(c.values[1] == doctest::Approx(0.28650479686019009).epsilon(1e-13));

    const auto g = MassDistribution::gaussian(1.0, 0.1);
    const auto b8 = Boost::from_velocity(0.8);
    const auto cg = survival_naive_boost(g, b8, TimeGrid::uniform(0.0, 1.0, 2));
    CHECK(cg.values[1] == doctest::Approx(0.97260447711634839).epsilon(1e-12));
}

TEST_CASE("heuristic space-time treatment recovers time dilation") {
    const auto bw = MassDistribution::breit_wigner(1.0, 1.0);
    const auto b = Boost::from_velocity(0.6);
    const auto c = survival_heuristic(bw, b, TimeGrid::uniform(0.0, 1.0, 2));
    CHECK(c.treatment == Treatment::heuristic_spacetime);
    CHECK(c.values[1] == doctest::Approx(0.44932896411722159).epsilon(1e-13));

    // ultrarelativistic limit: the moving system barely decays
    const auto fast =
        survival_heuristic(bw, Boost::from_velocity(0.9999995), TimeGrid::uniform(0.0, 1.0, 2));
    CHECK(fast.values[1] > 0.999);
}

TEST_CASE("zero velocity reduces every treatment to the rest frame") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uG(0.05, 0.5);
    const auto b0 = Boost::from_velocity(0.0);
    for (int i = 0; i < 5; ++i) {
        const auto d = MassDistribution::breit_wigner_truncated(1.0, uG(rng), 0.0);
        const auto grid = TimeGrid::uniform(0.0, 4.0, 5);
        const auto rest = survival_rest(d, grid);
        const auto naive = survival_naive_boost(d, b0, grid);
        const auto heur = survival_heuristic(d, b0, grid);
        for (int k = 0; k < 5; ++k) {
            CHECK(naive.values[k] == rest.values[k]);
            CHECK(heur.values[k] == rest.values[k]);
        }
    }
}

TEST_CASE("naive/heuristic duality against the rescaled rest curve") {
    std::mt19937 rng(20260809);
    std::uniform_real_distribution<double> uG(0.05, 0.4), uv(0.1, 0.95), uM(0.6, 2.0);
    for (int i = 0; i < 8; ++i) {
        const auto d = (i % 2) ? MassDistribution::breit_wigner_truncated(uM(rng), uG(rng), 0.0)
                               : MassDistribution::gaussian(uM(rng), 0.1 * uG(rng));
        const auto b = Boost::from_velocity(uv(rng));
        const auto grid = TimeGrid::uniform(0.0, 3.0, 7);
        const auto opts = numeric_opts();

        const auto naive = survival_naive_boost(d, b, grid, opts);
        const auto rest_fast = survival_rest(d, TimeGrid::uniform(0.0, 3.0 * b.gamma, 7), opts);
        const auto heur = survival_heuristic(d, b, grid, opts);
        const auto rest_slow = survival_rest(d, TimeGrid::uniform(0.0, 3.0 / b.gamma, 7), opts);
        for (int k = 0; k < 7; ++k) {
            CHECK(std::abs(naive.values[k] - rest_fast.values[k]) <=
                  naive.error_estimates[k] + rest_fast.error_estimates[k] + 1e-12);
            CHECK(std::abs(heur.values[k] - rest_slow.values[k]) <=
                  heur.error_estimates[k] + rest_slow.error_estimates[k] + 1e-12);
        }
    }
}

TEST_CASE("time dilation orders the three curves for a monotone decay law") {
    const auto bw = MassDistribution::breit_wigner(1.0, 0.7);
    const auto b = Boost::from_velocity(0.5);
    const auto grid = TimeGrid::uniform(0.5, 8.0, 12);
    const auto rest = survival_rest(bw, grid);
    const auto naive = survival_naive_boost(bw, b, grid);
    const auto heur = survival_heuristic(bw, b, grid);
    for (int k = 0; k < 12; ++k) {
        CHECK(heur.values[k] >= rest.values[k]);
        CHECK(rest.values[k] >= naive.values[k]);
    }
}

TEST_CASE("space-time amplitude") {
    const auto bw = MassDistribution::breit_wigner(1.0, 1.0);
    const auto b = Boost::from_velocity(0.6);

    SUBCASE("rest frame ignores position") {
        const auto d = MassDistribution::breit_wigner_truncated(1.0, 0.2, 0.0);
        const auto b0 = Boost::from_velocity(0.0);
        for (double x : {-3.0, 0.0, 7.5}) {
            const auto a = spacetime_amplitude(d, b0, 2.0, x);
            const auto f = fourier_point(d, 2.0);
            CHECK(std::abs(a - f.value) <= 2.0 * f.abs_error_estimate + 1e-13);
        }
    }

    SUBCASE("comoving point reproduces the dilated amplitude") {
        const double t = 1.7;
        const auto a = spacetime_amplitude(bw, b, t, b.v * t);
        const auto f = fourier_point(bw, t / b.gamma);
        CHECK(std::abs(a - f.value) < 1e-14);
    }

    SUBCASE("frozen value on the trajectory") {
        const auto a = spacetime_amplitude(bw, b, 1.0, 0.6);
        CHECK(std::abs(a) == doctest::Approx(0.67032004603563930).epsilon(1e-13));
    }

    SUBCASE("zero phase point and beyond") {
        // x = t/v makes the boosted light-cone combination vanish
        const auto a = spacetime_amplitude(bw, b, 1.0, 1.0 / 0.6);
        CHECK(std::abs(a) == doctest::Approx(1.0).epsilon(1e-13));
        // past it the argument changes sign; the modulus is even in it:
        // gamma (t - v x) = 1.25 (1 - 2) = -1.25
        const auto beyond = spacetime_amplitude(bw, b, 1.0, 2.0 / 0.6);
        CHECK(std::abs(beyond) == doctest::Approx(std::exp(-0.625)).epsilon(1e-12));
    }
}

TEST_CASE("small-time flatness for a finite-mean distribution") {
    const auto g = MassDistribution::gaussian(1.0, 0.05);
    const auto opts = numeric_opts();
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
        const auto r = fourier_point(g, eps, opts);
        const double defect = 1.0 - std::norm(r.value);
        CHECK(defect <= 2.0 * 0.05 * 0.05 * eps * eps + 1e-10);
        const double ratio = defect / eps;
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("long-time power law for a bounded-below spectrum") {
    const auto d = MassDistribution::breit_wigner_truncated(1.0, 0.1, 0.0);
    const auto grid = TimeGrid::logspace(1e3, 1e5, 9);
    const auto c = survival_rest(d, grid);
    const Eigen::ArrayXd x = grid.times().log();
    const Eigen::ArrayXd y = c.values.log();
    const double xm = x.mean(), ym = y.mean();
    const double slope = ((x - xm) * (y - ym)).sum() / ((x - xm) * (x - xm)).sum();
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.05));
}
