#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ghzsense/estimation.hpp"
#include "ghzsense/scaling.hpp"
#include "oracle.hpp"

using namespace ghzsense;

namespace {
const ClassicalNoiseParams kFig1{0.25, 1.0};
const SchedulePolicy kHalf{0.1, 0.5};
}  // namespace

TEST_CASE("exposure schedule") {
    CHECK(exposure_time(1, {0.3, 0.0}) == 0.3);
    CHECK(exposure_time(1000, {0.3, 0.0}) == 0.3);
    CHECK(exposure_time(100, kHalf) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(exposure_time(8, {1.0, 1.0}) == 0.125);
    CHECK_THROWS_AS(exposure_time(0, kHalf), std::invalid_argument);
    CHECK_THROWS_AS(exposure_time(4, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(exposure_time(4, {1.0, -0.5}), std::invalid_argument);
    CHECK(geometric_grid(4, 6) == std::vector<long long>{16, 32, 64});
}

TEST_CASE("gamma bound check") {
    const auto check = gamma_bound_check(100, kHalf, kFig1);
    // residual from the 50-digit oracle at t = 0.01
    const double leading = 4.0 * 0.1 * 0.0625 * std::numbers::inv_sqrtpi / 10.0;
    CHECK(check.residual == doctest::Approx(std::abs(oracle::gamma_classical(0.01, 0.25, 1.0) - leading)).epsilon(1e-4));
    CHECK(check.residual == doctest::Approx(2.35074291649e-8).epsilon(1e-4));
    CHECK(check.bound == doctest::Approx(4.23184506111e-6).epsilon(1e-10));
    CHECK(check.holds);

    const auto quiet = gamma_bound_check(100, kHalf, {0.0, 1.0});
    CHECK(quiet.residual == 0.0);
    CHECK(quiet.holds);

    long long L = 10;
    for (int k = 1; k <= 6; ++k, L *= 10) CHECK(gamma_bound_check(L, kHalf, kFig1).holds);

    // L^{2z} must exceed s^2 / tau_c^2
    CHECK_THROWS_AS(gamma_bound_check(4, {3.0, 0.5}, kFig1), std::domain_error);
}

TEST_CASE("uncertainty curve") {
    SUBCASE("noiseless z = 0 is Heisenberg-limited") {
        const auto grid = geometric_grid(2, 10);
        const auto series = uncertainty_curve(grid, {0.5, 0.0}, ClassicalNoiseParams{0.0, 1.0}, 1.0);
        for (const auto& e : series.entries)
            CHECK(e.uncertainty * static_cast<double>(e.L) == doctest::Approx(std::sqrt(1.0 / 0.5)).epsilon(1e-14));
        CHECK(fit_exponent(series).slope == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("entries match variance_ghz at the operating point") {
        const auto grid = geometric_grid(0, 14);
        for (const DephasingModel& model : {DephasingModel{kFig1}, DephasingModel{BosonicBathParams{0.05, 1.0}}}) {
            const auto series = uncertainty_curve(grid, kHalf, model, 3.0);
            REQUIRE(series.entries.size() == grid.size());
            for (const auto& e : series.entries) {
                CHECK(static_cast<double>(e.L) * e.t * e.delta == doctest::Approx(std::numbers::pi / 2));
                const double direct = variance_ghz({e.L, e.t, 3.0, e.delta}, model);
                CHECK(e.variance == doctest::Approx(direct).epsilon(1e-12));
                CHECK(e.uncertainty == doctest::Approx(std::sqrt(e.variance)));
            }
        }
    }
    SUBCASE("gamma L t approaches (4/sqrt(pi)) lam^2 s^2 and variance L^{3/2} levels off") {
        const double limit = 4.0 * std::numbers::inv_sqrtpi * 0.0625 * 0.01;
        double previous_gap = 1.0;
        double previous_scaled = 0.0;
        for (long long L : geometric_grid(4, 20)) {
            const double t = exposure_time(L, kHalf);
            const double gap = std::abs(static_cast<double>(L) * decoherence_exponent(t, kFig1) - limit);
            CHECK(gap < previous_gap);
            previous_gap = gap;
            const auto series = uncertainty_curve(std::vector<long long>{L}, kHalf, kFig1, 1.0);
            const double scaled = series.entries[0].variance * std::pow(static_cast<double>(L), 1.5);
            if (L >= (1LL << 10)) CHECK(scaled == doctest::Approx(previous_scaled).epsilon(1e-4));
            previous_scaled = scaled;
        }
        CHECK(previous_gap / limit < 1e-6);
    }
    CHECK_THROWS_AS(uncertainty_curve(std::vector<long long>{}, kHalf, kFig1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(uncertainty_curve(std::vector<long long>{4, 4}, kHalf, kFig1, 1.0), std::invalid_argument);
}

TEST_CASE("power-law fit") {
    std::vector<double> x, y;
    for (int k = 0; k < 12; ++k) {
        x.push_back(std::pow(2.0, k));
        y.push_back(3.0 / std::pow(2.0, k));
    }
    const auto fit = fit_power_law(x, y);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.stderr_slope < 1e-12);

    CHECK_THROWS_AS(fit_power_law(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law(std::vector<double>{1, 2, 3}, std::vector<double>{1, NAN, 3}), std::invalid_argument);

    ScalingSeries short_series = uncertainty_curve(geometric_grid(4, 9), kHalf, kFig1, 1.0);
    CHECK_THROWS_AS(fit_exponent(short_series, 0.5), std::invalid_argument);  // 3-point tail
    CHECK_NOTHROW(fit_exponent(short_series, 0.7));
}

TEST_CASE("three-quarter scaling for both noise models") {
    const auto grid = geometric_grid(4, 14);
    for (const DephasingModel& model : {DephasingModel{kFig1}, DephasingModel{BosonicBathParams{0.05, 1.0}}}) {
        const auto fit = fit_exponent(uncertainty_curve(grid, kHalf, model, 1.0), 0.5);
        CAPTURE(model_tag(model));
        CHECK(std::abs(fit.slope + 0.75) <= 0.02);
        CHECK(fit.r_squared > 0.999);
    }
}

TEST_CASE("slopes converge toward -3/4 as the window moves to larger L") {
    double previous = 1.0;
    for (int lo : {4, 6, 8, 10}) {
        const auto fit = fit_exponent(uncertainty_curve(geometric_grid(lo, lo + 4), kHalf, kFig1, 1.0), 1.0);
        const double miss = std::abs(fit.slope + 0.75);
        CAPTURE(lo);
        CHECK(miss <= previous);
        previous = miss;
    }
    CHECK(previous <= 0.02);
}

TEST_CASE("generalized exponent -(2 - z)/2") {
    const auto grid = geometric_grid(4, 14);
    for (double z : {0.5, 0.6, 0.8, 1.0}) {
        const auto fit = fit_exponent(uncertainty_curve(grid, {0.1, z}, kFig1, 1.0), 0.5);
        CAPTURE(z);
        CHECK(std::abs(fit.slope + (2.0 - z) / 2.0) <= 0.02);
    }
    const auto fit = fit_exponent(uncertainty_curve(grid, {0.1, 1.0}, BosonicBathParams{0.05, 1.0}, 1.0), 0.5);
    CHECK(std::abs(fit.slope + 0.5) <= 0.02);
}

TEST_CASE("optimal exposure") {
    SUBCASE("1/f closed form") {
        const auto opt = optimal_exposure(100, OneOverFLimit{kFig1}, 1.0);
        CHECK(opt.interior);
        CHECK(opt.t_star == doctest::Approx(std::pow(std::numbers::pi, 0.25) / (4.0 * 0.25 * 10.0)).epsilon(1e-4));
        CHECK(opt.t_star == doctest::Approx(0.13313353638003897).epsilon(1e-4));
    }
    SUBCASE("noiseless objective is monotone") {
        const auto opt = optimal_exposure(100, ClassicalNoiseParams{0.0, 1.0}, 1.0);
        CHECK_FALSE(opt.interior);
        CHECK(opt.t_star == doctest::Approx(opt.bracket_upper).epsilon(1e-5));
    }
    SUBCASE("classical t_star sqrt(L) tends to the 1/f constant") {
        const double target = std::pow(std::numbers::pi, 0.25) / (4.0 * 0.25);
        double previous = 1.0;
        for (long long L : {16LL, 256LL, 4096LL, 65536LL, 1048576LL}) {
            const auto opt = optimal_exposure(L, kFig1, 1.0);
            REQUIRE(opt.interior);
            const double miss = std::abs(opt.t_star * std::sqrt(static_cast<double>(L)) / target - 1.0);
            CHECK(miss < previous);
            previous = miss;
        }
        CHECK(previous < 1e-3);
    }
    SUBCASE("stationarity at the minimizer") {
        for (const DephasingModel& model :
             {DephasingModel{kFig1}, DephasingModel{BosonicBathParams{0.05, 1.0}}, DephasingModel{MarkovianLimit{kFig1}}}) {
            for (long long L : {4LL, 100LL, 10000LL}) {
                const auto opt = optimal_exposure(L, model, 2.0);
                REQUIRE(opt.interior);
                auto logf = [&](double u) {
                    const double t = std::exp(u);
                    const double Ld = static_cast<double>(L);
                    return 2.0 * Ld * decoherence_exponent(t, model) - std::log(2.0 * Ld * Ld * t);
                };
                const double u = std::log(opt.t_star), h = 1e-3;
                const double grad = (logf(u + h) - logf(u - h)) / (2 * h);
                const double curv = (logf(u + h) - 2 * logf(u) + logf(u - h)) / (h * h);
                CAPTURE(L);
                CHECK(curv > 0.0);
                CHECK(std::abs(grad) <= 1e-4 * std::max(1.0, curv));
                CHECK(opt.variance_star == doctest::Approx(std::exp(logf(u))).epsilon(1e-12));
            }
        }
    }
    SUBCASE("Markov limit minimizer 1/(2 gamma L)") {
        const auto opt = optimal_exposure(50, MarkovianLimit{kFig1}, 1.0);
        CHECK(opt.t_star == doctest::Approx(1.0 / (2.0 * 0.25 * 50)).epsilon(1e-5));
    }
}

TEST_CASE("divergence probe") {
    const DephasingModel model = kFig1;
    const auto to_20 = geometric_grid(4, 20);

    SUBCASE("z = 1/2 keeps decreasing") {
        const auto probe = divergence_probe(kHalf, model, 1.0, to_20);
        CHECK_FALSE(probe.eventually_increasing);
        CHECK(probe.eventually_decreasing);
    }
    SUBCASE("z = 1/4 diverges once c sqrt(L) exceeds 7/4") {
        // c = (4/sqrt(pi)) lam^2 s^2; with s = 1 the turn-around sits near L = 154
        const auto s1 = divergence_probe({1.0, 0.25}, model, 1.0, to_20);
        CHECK(s1.eventually_increasing);
        // with s = 0.1 it sits near L = 1.54e6, beyond 2^20
        const auto s01 = divergence_probe({0.1, 0.25}, model, 1.0, to_20);
        CHECK_FALSE(s01.eventually_increasing);
        const auto s01_long = divergence_probe({0.1, 0.25}, model, 1.0, geometric_grid(4, 25));
        CHECK(s01_long.eventually_increasing);
    }
    SUBCASE("noiseless never diverges") {
        for (double z : {0.0, 0.25, 0.5})
            CHECK_FALSE(divergence_probe({1.0, z}, ClassicalNoiseParams{0.0, 1.0}, 1.0, to_20).eventually_increasing);
    }
    CHECK_THROWS_AS(divergence_probe(kHalf, model, 1.0, geometric_grid(4, 7)), std::invalid_argument);
}

TEST_CASE("short-time fidelity") {
    CHECK(fidelity_smalltime(0.0, 10, kFig1).fidelity == 1.0);

    const auto f = fidelity_smalltime(0.01, 10, kFig1);
    REQUIRE(f.quadratic_prediction.has_value());
    CHECK(std::abs(f.fidelity - *f.quadratic_prediction) <= 1e-6);
    CHECK(f.fidelity == doctest::Approx(0.99992948245062036).epsilon(1e-14));
    CHECK(*f.quadratic_prediction == doctest::Approx(0.99992947630205653).epsilon(1e-14));

    // with t = s L^{-1/2} the infidelity levels off at (2 lam^2 / sqrt(pi)) s^2
    const double plateau = 2.0 * 0.0625 * std::numbers::inv_sqrtpi * 0.01;
    for (long long L : geometric_grid(8, 20)) {
        const auto g = fidelity_smalltime(exposure_time(L, kHalf), L, kFig1);
        CHECK(g.infidelity == doctest::Approx(plateau).epsilon(1e-3));
    }

    const auto bos = fidelity_smalltime(1e-3, 4, BosonicBathParams{0.05, 1.0});
    REQUIRE(bos.quadratic_prediction.has_value());
    CHECK(std::abs(bos.fidelity - *bos.quadratic_prediction) <= 1e-9);
    CHECK_FALSE(fidelity_smalltime(0.1, 4, MarkovianLimit{kFig1}).quadratic_prediction.has_value());
}
