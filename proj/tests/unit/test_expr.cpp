#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/expr_generator.hpp"
#include "../support/oracles.hpp"
#include "flc/error.hpp"
#include "flc/expr.hpp"

using namespace flc;
namespace ex = flc::expr;

namespace {

template <typename T>
const T* node_as(const ex::Expr& e) {
    return std::get_if<T>(&e.node().value);
}

std::size_t parse_error_offset(std::string_view text) {
    try {
        (void)ex::parse(text);
    } catch (const ParseError& err) {
        return err.offset();
    }
    return std::string_view::npos;
}

bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)}); }

}  // namespace

TEST_CASE("parse examples") {
    const auto p = ex::parse("x^(2*a)");
    REQUIRE(node_as<ex::Pow>(p) != nullptr);
    CHECK(node_as<ex::Pow>(p)->var == "x");
    CHECK(node_as<ex::Pow>(p)->k == 2);

    const auto s = ex::parse("3*E(2*x^a) - x^(1*a)");
    const auto* sum = node_as<ex::Sum>(s);
    REQUIRE(sum != nullptr);
    REQUIRE(sum->terms.size() == 2);
    const auto* first = node_as<ex::Scale>(sum->terms[0]);
    REQUIRE(first != nullptr);
    CHECK(first->coef == ex::Coefficient(3.0));
    REQUIRE(node_as<ex::Ml>(first->child) != nullptr);
    CHECK(node_as<ex::Ml>(first->child)->scale == 2.0);
    const auto* second = node_as<ex::Scale>(sum->terms[1]);
    REQUIRE(second != nullptr);
    CHECK(second->coef == ex::Coefficient(-1.0));
    CHECK(second->child == ex::power("x", 1));

    CHECK(ex::parse("  x ^ ( 2 * a ) ") == p);
    CHECK(ex::parse("x^a") == ex::power("x", 1));
    CHECK(ex::parse("x^(a)") == ex::power("x", 1));
    CHECK(ex::parse("t^(3*a)") == ex::power("t", 3));
    CHECK(ex::parse("E(-2*x^a)") == ex::mittag_leffler("x", -2.0));
    CHECK(ex::parse("x^(2*a)/G(1+2*a)") == ex::scaled(ex::Coefficient(1.0, {}, {2}), ex::power("x", 2)));
    CHECK(ex::parse("1.5e2") == ex::constant(ex::Coefficient(150.0)));
    CHECK(ex::parse("2*E(x^a)") == ex::scaled(ex::Coefficient(2.0), ex::mittag_leffler("x", 1.0)));
}

TEST_CASE("parse errors report offsets") {
    CHECK(parse_error_offset("x^(a") == 4);
    CHECK(parse_error_offset("") == 0);
    CHECK(parse_error_offset("x +") == 3);
    CHECK(parse_error_offset("y") == 0);
    CHECK(parse_error_offset("x^(2.5*a)") == 3);
    CHECK(parse_error_offset("E(x^2)") == 4);
    CHECK(parse_error_offset("x / x") == 4);
    CHECK(parse_error_offset("x^(2*a))") == 7);
    try {
        (void)ex::parse("x^(a");
        FAIL("no error");
    } catch (const ParseError& err) {
        CHECK(err.expected() == "')'");
        CHECK(std::string(err.kind()) == "ParseError");
    }
}

TEST_CASE("printer is canonical") {
    CHECK(ex::to_string(ex::parse("E(x^a)")) == "E(x^a)");
    CHECK(ex::to_string(ex::parse("x^a")) == "x^(1*a)");
    CHECK(ex::to_string(ex::parse("3*E(2*x^a) - x^(1*a)")) == "3*E(2*x^a) - x^(1*a)");
    CHECK(ex::to_string(ex::parse("-2 + x^(2*a)/G(1+2*a)")) == "-2 + 1/G(1+2*a)*x^(2*a)");
    CHECK(ex::to_string(ex::parse("0.1*E(-0.5*t^a)")) == "0.1*E(-0.5*t^a)");
}

TEST_CASE("round trip over generated expressions") {
    flc::testing::ExprGenerator gen(2024, false);
    for (int i = 0; i < 100; ++i) {
        gen.set_var(i % 5 == 0 ? "t" : "x");
        const auto e = gen.expr();
        const std::string text = ex::to_string(e);
        INFO(text);
        const auto back = ex::parse(text);
        CHECK(back == e);
        CHECK(ex::to_string(back) == text);
    }
}

TEST_CASE("diff examples") {
    CHECK(ex::to_string(ex::diff(ex::parse("E(x^a)"))) == "E(x^a)");
    const auto d = ex::diff(ex::parse("x^(1*a)"));
    CHECK(ex::evaluate(d, {{"x", 0.7}}, FractalOrder(0.5)) == doctest::Approx(oracle::kGammaHalf3).epsilon(1e-14));
    CHECK(ex::to_string(ex::diff(ex::parse("E(2*x^a)"))) == "2*E(2*x^a)");
    CHECK(ex::to_string(ex::diff(ex::parse("x^(2*a)"))) == "G(1+2*a)/G(1+1*a)*x^(1*a)");
    CHECK(ex::to_string(ex::diff(ex::parse("5 + x^(0*a)"))) == "0");
    CHECK_THROWS_AS(ex::diff(ex::parse("x * E(x^a)")), UnsupportedForm);
    CHECK_THROWS_AS(ex::diff(ex::parse("x")), UnsupportedForm);
    CHECK_THROWS_AS(ex::diff(ex::parse("x^a + t^a")), UnsupportedForm);
}

TEST_CASE("evaluate examples") {
    CHECK(ex::evaluate(ex::parse("x^(2*a)"), {{"x", 4.0}}, FractalOrder(0.5)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(ex::evaluate(ex::parse("E(x^a)"), {{"x", 1.0}}, FractalOrder(1.0)) ==
          doctest::Approx(2.718281828459045).epsilon(1e-14));
    CHECK(ex::evaluate(ex::parse("E(2*x^a)"), {{"x", 1.0}}, FractalOrder(0.5)) ==
          doctest::Approx(oracle::kMlHalfAt2).epsilon(1e-12));
    CHECK(ex::evaluate(ex::parse("G(1+1*a)"), {}, FractalOrder(0.5)) ==
          doctest::Approx(oracle::kGammaHalf3).epsilon(1e-15));
    CHECK_THROWS_AS(ex::evaluate(ex::parse("x^a"), {}, FractalOrder(0.5)), UnboundVariable);
    CHECK_THROWS_AS(ex::evaluate(ex::parse("x^a"), {{"x", -1.0}}, FractalOrder(0.5)), DomainError);
    CHECK_THROWS_AS(ex::evaluate(ex::parse("x^a + t^a"), {{"x", 1.0}}, FractalOrder(0.5)), UnboundVariable);
}

TEST_CASE("to_series examples") {
    const auto s = ex::to_series(ex::parse("x^(2*a)"), FractalOrder(0.5), 5);
    CHECK(s.coeffs() == std::vector<double>{0.0, 0.0, 1.0});
    const auto e = ex::to_series(ex::parse("E(x^a)"), FractalOrder(0.5), 3);
    REQUIRE(e.coeffs().size() == 4);
    CHECK(e.coeff(0) == 1.0);
    CHECK(e.coeff(1) == doctest::Approx(1.1283791670955125739).epsilon(1e-15));
    CHECK(e.coeff(2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.coeff(3) == doctest::Approx(0.75225277806367504926).epsilon(1e-15));

    const auto de = ex::to_series(ex::diff(ex::parse("E(x^a)")), FractalOrder(0.5), 3);
    CHECK(de.coeffs() == e.coeffs());
    CHECK_THROWS_AS(ex::to_series(ex::parse("x*x^a"), FractalOrder(0.5)), UnsupportedForm);
    CHECK_THROWS_AS(ex::to_series(ex::parse("x"), FractalOrder(0.5)), UnsupportedForm);
}

TEST_CASE("rule table commutes with series_derivative") {
    flc::testing::ExprGenerator gen(99, true);
    for (int i = 0; i < 100; ++i) {
        const auto e = gen.expr();
        INFO(ex::to_string(e));
        for (double a : {0.3, 0.5, kCantorDimension, 1.0}) {
            const FractalOrder order(a);
            const int n = 20;
            const auto lhs = ex::to_series(ex::diff(e), order, n);
            const auto rhs = series_derivative(ex::to_series(e, order, n));
            for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
                const double x = lhs.coeff(k);
                const double y = rhs.coeff(k);
                CHECK(std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y)));
            }
        }
    }
}

TEST_CASE("evaluation agrees with the series form") {
    flc::testing::ExprGenerator gen(7, true);
    for (int i = 0; i < 100; ++i) {
        const auto e = gen.expr();
        INFO(ex::to_string(e));
        for (double a : {0.5, 0.8, 1.0}) {
            const FractalOrder order(a);
            const auto s = ex::to_series(e, order, 60);
            for (double x : {0.0, 0.3, 1.0, 2.0}) {
                CHECK(close(ex::evaluate(e, {{"x", x}}, order), series_eval(s, x), 1e-8));
            }
        }
    }
}

TEST_CASE("alpha = 1 reproduces classical derivatives") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_int_distribution<int> power(0, 5);
    const FractalOrder one(1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double c1 = coef(rng);
        const double c2 = coef(rng);
        const double s = coef(rng);
        const int k = power(rng);
        const auto e = ex::sum({ex::scaled(ex::Coefficient(c1), ex::power("x", k)),
                                ex::scaled(ex::Coefficient(c2), ex::mittag_leffler("x", s))});
        const auto d = ex::diff(e);
        for (double x : {0.1, 0.5, 1.3, 2.0}) {
            const double classical = c1 * k * (k == 0 ? 0.0 : std::pow(x, k - 1)) + c2 * s * std::exp(s * x);
            CHECK(close(ex::evaluate(d, {{"x", x}}, one), classical, 1e-8));
        }
    }
}

TEST_CASE("variables") {
    CHECK(ex::variables(ex::parse("x^a + t^a + 3")) == std::vector<std::string>{"t", "x"});
    CHECK(ex::variables(ex::parse("G(1+2*a)")).empty());
}
