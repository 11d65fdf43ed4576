#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "flc/analysis.hpp"
#include "flc/error.hpp"
#include "flc/special.hpp"

using namespace flc;

namespace {

const std::vector<double> kDeltas = {0.5, 0.1, 0.01, 1e-3, 1e-4};

}  // namespace

TEST_CASE("hoelder_fit on sqrt") {
    const auto est = hoelder_fit([](double x) { return std::sqrt(x); }, 0.0, 1.0, 256);
    CHECK(std::fabs(est.exponent_hat - 0.5) <= 0.05);
    CHECK(est.constant_hat >= 0.0);
    CHECK(est.fit_residual >= 0.0);
    CHECK(est.pairs_used >= 8);
}

TEST_CASE("hoelder_fit on the Cantor staircase") {
    const auto est = hoelder_fit([](double x) { return cantor_staircase(x, 12); }, 0.0, 1.0, 256);
    CHECK(std::fabs(est.exponent_hat - kCantorDimension) <= 0.05);
}

TEST_CASE("hoelder_fit on a Lipschitz line") {
    const auto est = hoelder_fit([](double x) { return 3.0 * x; }, 0.0, 1.0, 64);
    CHECK(std::fabs(est.exponent_hat - 1.0) <= 0.02);
    CHECK(est.constant_hat == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("hoelder constant dominates sampled ratios") {
    auto f = [](double x) { return std::sqrt(x) + 0.3 * x; };
    const auto est = hoelder_fit(f, 0.0, 1.0, 128);
    const double c = hoelder_constant(f, 0.0, 1.0, est.exponent_hat, 128);
    CHECK(est.constant_hat >= c * (1.0 - 1e-12));
}

TEST_CASE("hoelder_fit scale covariance") {
    auto f = [](double x) { return cantor_staircase(x, 10) + 0.2 * std::sqrt(x); };
    const auto base = hoelder_fit(f, 0.0, 1.0, 128);
    for (double c : {-4.0, 0.25, 10.0}) {
        const auto scaled = hoelder_fit([&](double x) { return c * f(x); }, 0.0, 1.0, 128);
        CHECK(std::fabs(scaled.exponent_hat - base.exponent_hat) <= 0.01);
        CHECK(scaled.constant_hat == doctest::Approx(std::fabs(c) * base.constant_hat).epsilon(0.05));
    }
}

TEST_CASE("hoelder_fit is reproducible and thread-count independent") {
    auto f = [](double x) { return cantor_staircase(x, 8); };
    const auto a = hoelder_fit(f, 0.0, 1.0, 200);
    HoelderOptions opts;
    opts.threads = 4;
    const auto b = hoelder_fit(f, 0.0, 1.0, 200, opts);
    CHECK(a.exponent_hat == b.exponent_hat);
    CHECK(a.constant_hat == b.constant_hat);
    CHECK(a.pairs_used == b.pairs_used);
}

TEST_CASE("hoelder_fit errors") {
    CHECK_THROWS_AS(hoelder_fit([](double) { return 1.0; }, 0.0, 1.0, 64), DegenerateDataError);
    CHECK_THROWS_AS(hoelder_fit([](double x) { return x; }, 1.0, 0.0, 64), ConfigError);
    CHECK_THROWS_AS(hoelder_fit([](double x) { return x; }, 0.0, 1.0, 4), ConfigError);
}

TEST_CASE("relaxation solution is Hoelder of order alpha") {
    for (double a : {0.5, 0.9}) {
        const FractalOrder order(a);
        auto y = [&](double t) { return ml(order, -std::pow(t, a)).value; };
        const double m = hoelder_constant(y, 0.0, 3.0, a, 128);
        CHECK(std::isfinite(m));
        CHECK(m > 0.0);
        CHECK(m < 10.0);
        const auto est = hoelder_fit(y, 0.0, 3.0, 128);
        CHECK(est.exponent_hat <= a + 0.05);
    }
}

TEST_CASE("lf_continuity_check 1-D") {
    const FractalOrder half(0.5);
    auto r = lf_continuity_check([](double x) { return std::sqrt(x); }, 0.0, half, kDeltas, 1.01,
                                 Interval{0.0, 1.0});
    CHECK(r.is_continuous);
    CHECK(r.worst_ratio <= 1.01);
    CHECK(r.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));

    r = lf_continuity_check([](double x) { return x < 0.3 ? 0.0 : 1.0; }, 0.3, half, kDeltas, 5.0);
    CHECK_FALSE(r.is_continuous);
    CHECK(r.worst_pair.first == 0.3);
    CHECK(r.worst_pair.second < 0.3);

    auto y = [&](double t) { return ml(half, -std::sqrt(t)).value; };
    r = lf_continuity_check(y, 1.0, half, kDeltas, 2.0, Interval{0.0, 3.0});
    CHECK(r.is_continuous);

    CHECK_THROWS_AS(lf_continuity_check(y, 1.0, half, {}, 2.0), ConfigError);
    CHECK_THROWS_AS(lf_continuity_check(y, 1.0, half, {0.1, 0.5}, 2.0), ConfigError);
    CHECK_THROWS_AS(lf_continuity_check(y, 1.0, half, kDeltas, 0.0), ConfigError);
}

TEST_CASE("lf_continuity_check is monotone in the bound") {
    const FractalOrder order(0.7);
    auto f = [](double x) { return std::sin(5.0 * x) + std::cbrt(x); };
    for (double c = 0.5; c <= 20.0; c *= 1.5) {
        const auto r = lf_continuity_check(f, 0.2, order, kDeltas, c);
        if (r.is_continuous) {
            CHECK(lf_continuity_check(f, 0.2, order, kDeltas, c * 1.1).is_continuous);
        }
        CHECK(r.is_continuous == (r.worst_ratio <= c));
    }
}

TEST_CASE("lf_continuity_check 2-D") {
    const FractalOrder half(0.5);
    const Interval pos{0.0, 10.0};
    auto r = lf_continuity_check_2d([](double x, double y) { return std::sqrt(x) + std::sqrt(y); }, {0.0, 0.0}, half,
                                    kDeltas, 2.01, pos, pos);
    CHECK(r.is_continuous);
    CHECK(r.worst_ratio <= 2.01);

    r = lf_continuity_check_2d([](double, double) { return 4.0; }, {1.0, 1.0}, half, kDeltas, 1e-9);
    CHECK(r.is_continuous);
    CHECK(r.worst_ratio == 0.0);

    r = lf_continuity_check_2d([](double x, double y) { return (x < 0.5 ? 0.0 : 1.0) + y; }, {0.5, 0.0}, half, kDeltas,
                               3.0);
    CHECK_FALSE(r.is_continuous);
    CHECK(r.worst_pair.first < 0.5);
}
