#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "flc/error.hpp"
#include "flc/series.hpp"

using namespace flc;

namespace {

const double kOrders[] = {0.3, 0.5, kCantorDimension, 0.9, 1.0};

std::vector<double> ml_coeffs(double alpha, int n, double scale = 1.0) {
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = std::pow(scale, k) / std::tgamma(1.0 + k * alpha);
    return c;
}

bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b)); }

}  // namespace

TEST_CASE("FractalSeries canonicalization") {
    const FractalSeries s(FractalOrder(0.5), 0.0, {1.0, 2.0, 0.0, 1e-310});
    CHECK(s.degree() == 1);
    CHECK(FractalSeries(FractalOrder(0.5), 0.0, {0.0, 0.0}).is_zero());
    CHECK(FractalSeries(FractalOrder(0.5), 0.0, {}).degree() == -1);
}

TEST_CASE("series_eval") {
    const FractalOrder half(0.5);
    CHECK(series_eval(FractalSeries(half, 0.0, {3.0}), 7.0) == 3.0);
    CHECK(series_eval(FractalSeries(half, 1.5, {3.0, 9.0}), 1.5) == 3.0);
    CHECK(series_eval(FractalSeries(half, 0.0, ml_coeffs(0.5, 40)), 1.0) ==
          doctest::Approx(oracle::kMlHalfAt1).epsilon(1e-10));
    CHECK(series_eval(FractalSeries(FractalOrder(1.0), 0.0, {1.0, 1.0}), 2.0) == 3.0);
    CHECK_THROWS_AS(series_eval(FractalSeries(half, 1.0, {1.0}), 0.5), DomainError);
    CHECK(series_eval(FractalSeries(half, 0.0, {}), 2.0) == 0.0);
}

TEST_CASE("series_derivative examples") {
    const FractalOrder half(0.5);
    const auto d = series_derivative(FractalSeries(half, 0.0, {0.0, 1.0}));
    REQUIRE(d.degree() == 0);
    CHECK(d.coeff(0) == doctest::Approx(oracle::kGammaHalf3).epsilon(1e-15));
    CHECK(series_derivative(FractalSeries(half, 0.0, {5.0})).is_zero());
    CHECK(series_derivative(FractalSeries(half, 0.0, {})).is_zero());
}

TEST_CASE("E_alpha coefficients are a fixed point of series_derivative") {
    for (double a : kOrders) {
        const int n = 30;
        const FractalSeries e(FractalOrder(a), 0.0, ml_coeffs(a, n));
        const auto d = series_derivative(e);
        REQUIRE(d.degree() == n - 1);
        for (int k = 0; k < n; ++k) CHECK(close_rel(d.coeff(static_cast<std::size_t>(k)), e.coeff(static_cast<std::size_t>(k)), 1e-12));
    }
}

TEST_CASE("scaled E_alpha maps to k times itself") {
    for (double a : kOrders) {
        for (double k : {-1.5, 0.5, 2.0, 3.0}) {
            const int n = 25;
            const FractalSeries e(FractalOrder(a), 0.0, ml_coeffs(a, n, k));
            const auto d = series_derivative(e);
            for (int j = 0; j < n; ++j) {
                CHECK(close_rel(d.coeff(static_cast<std::size_t>(j)), k * e.coeff(static_cast<std::size_t>(j)), 1e-12));
            }
        }
    }
}

TEST_CASE("series_antiderivative examples") {
    const FractalOrder half(0.5);
    const auto b = series_antiderivative(FractalSeries(half, 0.0, {1.0}));
    REQUIRE(b.degree() == 1);
    CHECK(b.coeff(0) == 0.0);
    CHECK(b.coeff(1) == doctest::Approx(1.0 / oracle::kGammaHalf3).epsilon(1e-15));
    const auto c = series_antiderivative(FractalSeries(half, 0.0, {0.0, 1.0}));
    CHECK(c.coeff(2) == doctest::Approx(oracle::kGammaHalf3).epsilon(1e-15));
    CHECK(series_antiderivative(FractalSeries(half, 0.0, {})).is_zero());
}

TEST_CASE("derivative undoes antiderivative on random series") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<int> deg(0, 40);
    for (double a : kOrders) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
            for (double& v : c) v = coef(rng);
            c.back() = 1.0 + std::fabs(c.back());
            const FractalSeries s(FractalOrder(a), coef(rng), c);
            const auto back = series_derivative(series_antiderivative(s));
            REQUIRE(back.coeffs().size() == s.coeffs().size());
            for (std::size_t k = 0; k < c.size(); ++k) CHECK(close_rel(back.coeff(k), s.coeff(k), 1e-12));
        }
    }
}

TEST_CASE("alpha = 1 reproduces classical power-series calculus") {
    const FractalOrder one(1.0);
    const FractalSeries p(one, 0.0, {4.0, -3.0, 2.0, 5.0});  // 4 - 3x + 2x^2 + 5x^3
    const auto d = series_derivative(p);
    CHECK(d.coeffs() == std::vector<double>{-3.0, 4.0, 15.0});
    const auto i = series_antiderivative(p);
    for (std::size_t k = 0; k < 4; ++k) CHECK(close_rel(i.coeff(k + 1), p.coeff(k) / static_cast<double>(k + 1), 1e-12));
}

TEST_CASE("taylor_from_derivatives") {
    const auto s = taylor_from_derivatives({1.0, 1.0, 1.0, 1.0}, FractalOrder(0.5), 0.0);
    CHECK(s.coeff(0) == 1.0);
    CHECK(s.coeff(1) == doctest::Approx(1.1283791670955125739).epsilon(1e-14));
    CHECK(s.coeff(2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.coeff(3) == doctest::Approx(0.75225277806367504926).epsilon(1e-14));
    CHECK(taylor_from_derivatives({1.0}, FractalOrder(0.3), 2.0).coeffs() == std::vector<double>{1.0});
    CHECK_THROWS_AS(taylor_from_derivatives({}, FractalOrder(0.3), 0.0), ConfigError);
}

TEST_CASE("Taylor consistency: rule derivatives rebuild the series") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (double a : kOrders) {
        std::vector<double> c(12);
        for (double& v : c) v = coef(rng);
        const FractalSeries s(FractalOrder(a), 0.25, c);
        std::vector<double> derivs;
        FractalSeries cur = s;
        for (std::size_t k = 0; k < c.size(); ++k) {
            derivs.push_back(series_eval(cur, s.center()));
            cur = series_derivative(cur);
        }
        const auto rebuilt = taylor_from_derivatives(derivs, s.order(), s.center());
        for (std::size_t k = 0; k < c.size(); ++k) CHECK(close_rel(rebuilt.coeff(k), s.coeff(k), 1e-12));
    }
}

TEST_CASE("taylor_remainder") {
    const FractalSeries exp3(FractalOrder(1.0), 0.0, {1.0, 1.0, 0.5, 1.0 / 6.0});
    CHECK(taylor_remainder([](double x) { return std::exp(x); }, exp3, 0.1) ==
          doctest::Approx(oracle::kExpTaylor3Rem).epsilon(1e-8));
    const FractalSeries poly(FractalOrder(0.5), 0.0, {1.0, -2.0, 0.5});
    CHECK(std::fabs(taylor_remainder([](double x) { return 1.0 - 2.0 * std::sqrt(x) + 0.5 * x; }, poly, 0.8)) < 1e-12);

    double prev = 1e300;
    for (int n = 2; n <= 16; n += 2) {
        const FractalSeries trunc(FractalOrder(0.5), 0.0, ml_coeffs(0.5, n));
        const double r = std::fabs(taylor_remainder(oracle::ml_half, trunc, 1.0));
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("remainder order: E_alpha truncations scale as x^((n+1) alpha)") {
    for (double a : {0.5, 0.9}) {
        const int n = 3;
        const FractalSeries trunc(FractalOrder(a), 0.0, ml_coeffs(a, n));
        const FractalSeries full(FractalOrder(a), 0.0, ml_coeffs(a, 60));
        std::vector<double> xs, rs;
        for (double x = 0.2; x > 1e-3; x *= 0.5) {
            xs.push_back(x);
            rs.push_back(std::fabs(series_eval(full, x) - series_eval(trunc, x)));
        }
        CHECK(std::fabs(oracle::loglog_slope(xs, rs) - (n + 1) * a) <= 0.1);
    }
}

TEST_CASE("mvt_locate") {
    const FractalOrder one(1.0);
    auto w = mvt_locate([](double x) { return x * x; }, [](double x) { return 2.0 * x; }, 0.0, 1.0, one);
    CHECK(w.xi == doctest::Approx(0.5).epsilon(1e-8));
    w = mvt_locate([](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }, 0.0, 1.0, one);
    CHECK(w.xi == doctest::Approx(0.57735026918962576451).epsilon(1e-8));
    CHECK(std::fabs(w.residual) <= 1e-9);
    CHECK(w.xi > 0.0);
    CHECK(w.xi < 1.0);

    const FractalOrder half(0.5);
    const FractalSeries xa(half, 0.0, {0.0, 1.0});
    w = mvt_locate([&](double x) { return series_eval(xa, x); }, [](double) { return oracle::kGammaHalf3; }, 0.0,
                   1.0, half);
    CHECK(std::fabs(w.residual) <= 1e-12);
    CHECK(w.xi > 0.0);
    CHECK(w.xi < 1.0);

    CHECK_THROWS_AS(mvt_locate([](double x) { return x; }, [](double) { return 5.0; }, 0.0, 1.0, one), NoWitnessError);
    CHECK_THROWS_AS(mvt_locate([](double x) { return x; }, [](double) { return 1.0; }, 1.0, 0.0, one), ConfigError);
}

TEST_CASE("taylor2d") {
    const FractalOrder one(1.0);
    auto exp_oracle = [](int, int) { return 1.0; };  // every mixed derivative of e^(x+y) at 0
    const auto s = taylor2d(exp_oracle, {0.0, 0.0}, one, 4);
    REQUIRE(s.degree() == 4);
    for (int n = 0; n <= 4; ++n) CHECK(s.rows()[static_cast<std::size_t>(n)].size() == static_cast<std::size_t>(n) + 1);
    CHECK(std::fabs(series2d_eval(s, 0.1, 0.1) - std::exp(0.2)) <= 3e-6);

    double prev = 1e300;
    for (int n = 0; n <= 10; ++n) {
        const double r = std::fabs(std::exp(0.2) - series2d_eval(taylor2d(exp_oracle, {0.0, 0.0}, one, n), 0.1, 0.1));
        CHECK(r < prev);
        prev = r;
    }

    const auto c = taylor2d([](int i, int j) { return (i == 0 && j == 0) ? 7.0 : 0.0; }, {1.0, 2.0}, FractalOrder(0.5), 3);
    CHECK(c.rows()[0][0] == 7.0);
    for (std::size_t n = 1; n < c.rows().size(); ++n) {
        for (double v : c.rows()[n]) CHECK(v == 0.0);
    }
    CHECK(series2d_eval(c, 3.0, 4.0) == 7.0);

    const auto strict = taylor2d(exp_oracle, {0.0, 0.0}, one, 3, Taylor2dNormalization::unnormalized);
    CHECK(strict.rows()[2][1] == 1.0);
    CHECK(s.rows()[2][1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.rows()[2][0] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(taylor2d([](int, int) -> double { throw std::runtime_error("no"); }, {0, 0}, one, 2), OracleError);
    CHECK_THROWS_AS(taylor2d([](int, int) { return std::nan(""); }, {0, 0}, one, 2), OracleError);
    CHECK_THROWS_AS(series2d_eval(s, -0.1, 0.0), DomainError);
}
