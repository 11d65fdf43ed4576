#include "flc/series.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "detail/numeric.hpp"
#include "flc/error.hpp"

namespace flc {

namespace {

constexpr double kNegligible = 1e-300;

std::vector<double> canonical(std::vector<double> coeffs) {
    while (!coeffs.empty() && std::fabs(coeffs.back()) < kNegligible) coeffs.pop_back();
    return coeffs;
}

}  // namespace

FractalSeries::FractalSeries(FractalOrder order, double x0, std::vector<double> coeffs)
    : order_(order), x0_(x0), coeffs_(canonical(std::move(coeffs))) {}

double series_eval(const FractalSeries& s, double x) {
    if (!(x >= s.center())) {
        throw DomainError("series_eval", "x = " + std::to_string(x) + " lies left of the center " +
                                             std::to_string(s.center()));
    }
    const double dx = x - s.center();
    detail::CompensatedSum sum;
    for (std::size_t k = 0; k < s.coeffs().size(); ++k) {
        sum.add(s.coeffs()[k] * fractal_pow(dx, static_cast<double>(k) * s.alpha()));
    }
    return sum.value();
}

FractalSeries series_derivative(const FractalSeries& s) {
    const auto& a = s.coeffs();
    std::vector<double> b;
    if (a.size() > 1) {
        b.resize(a.size() - 1);
        for (std::size_t k = 1; k < a.size(); ++k) {
            b[k - 1] = a[k] * gamma_ratio(s.alpha(), static_cast<int>(k), static_cast<int>(k) - 1);
        }
    }
    return FractalSeries(s.order(), s.center(), std::move(b));
}

FractalSeries series_antiderivative(const FractalSeries& s) {
    const auto& a = s.coeffs();
    std::vector<double> b;
    if (!a.empty()) {
        b.assign(a.size() + 1, 0.0);
        for (std::size_t k = 0; k < a.size(); ++k) {
            b[k + 1] = a[k] * gamma_ratio(s.alpha(), static_cast<int>(k), static_cast<int>(k) + 1);
        }
    }
    return FractalSeries(s.order(), s.center(), std::move(b));
}

FractalSeries taylor_from_derivatives(const std::vector<double>& derivs, const FractalOrder& order,
                                      double x0) {
    if (derivs.empty()) throw ConfigError("taylor_from_derivatives", "needs at least f(x0)");
    std::vector<double> a(derivs.size());
    for (std::size_t k = 0; k < derivs.size(); ++k) {
        a[k] = derivs[k] * gamma_ratio(order.value(), 0, static_cast<int>(k));
    }
    return FractalSeries(order, x0, std::move(a));
}

double taylor_remainder(const ScalarFunction& f, const FractalSeries& s, double x) {
    double fx = 0.0;
    try {
        fx = f(x);
    } catch (const std::exception& e) {
        throw EvaluationError("taylor_remainder", std::string("f failed: ") + e.what());
    }
    if (!std::isfinite(fx)) throw EvaluationError("taylor_remainder", "f(x) is not finite");
    return fx - series_eval(s, x);
}

MvtWitness mvt_locate(const ScalarFunction& f, const ScalarFunction& falpha, double x0, double x,
                      const FractalOrder& order, std::size_t samples) {
    constexpr const char* op = "mvt_locate";
    if (!(x0 < x)) throw ConfigError(op, "requires x0 < x");
    if (samples == 0) throw ConfigError(op, "needs at least one interior sample");

    auto call = [&](const ScalarFunction& fn, double at) {
        double v = 0.0;
        try {
            v = fn(at);
        } catch (const std::exception& e) {
            throw EvaluationError(op, "evaluation at " + std::to_string(at) + " failed: " + e.what());
        }
        if (!std::isfinite(v)) throw EvaluationError(op, "non-finite value at " + std::to_string(at));
        return v;
    };

    const double rise = call(f, x) - call(f, x0);
    const double scale = std::pow(x - x0, order.value()) / std::tgamma(1.0 + order.value());
    const double tol = 1e-9 * std::max(1.0, std::fabs(rise));
    auto residual = [&](double xi) { return rise - call(falpha, xi) * scale; };

    std::vector<double> xi(samples);
    std::vector<double> g(samples);
    std::size_t best = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        xi[i] = x0 + (x - x0) * static_cast<double>(i + 1) / static_cast<double>(samples + 1);
        g[i] = residual(xi[i]);
        if (std::fabs(g[i]) < std::fabs(g[best])) best = i;
    }
    if (std::fabs(g[best]) <= tol) return MvtWitness{xi[best], g[best]};

    for (std::size_t i = 0; i + 1 < samples; ++i) {
        if (std::signbit(g[i]) == std::signbit(g[i + 1])) continue;
        double lo = xi[i];
        double hi = xi[i + 1];
        double g_lo = g[i];
        MvtWitness w{lo, g_lo};
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g_mid = residual(mid);
            if (std::fabs(g_mid) < std::fabs(w.residual)) w = MvtWitness{mid, g_mid};
            if (std::fabs(g_mid) <= tol || mid <= lo || mid >= hi) break;
            if (std::signbit(g_mid) == std::signbit(g_lo)) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        if (std::fabs(w.residual) <= tol) return w;
    }
    throw NoWitnessError(op, "residual has no sign change on (" + std::to_string(x0) + ", " +
                                 std::to_string(x) + ") at " + std::to_string(samples) + " samples");
}

FractalSeries2D::FractalSeries2D(FractalOrder order, std::pair<double, double> center,
                                 std::vector<std::vector<double>> rows)
    : order_(order), center_(center), rows_(std::move(rows)) {
    for (std::size_t n = 0; n < rows_.size(); ++n) {
        if (rows_[n].size() != n + 1) {
            throw ConfigError("FractalSeries2D", "row " + std::to_string(n) + " must hold " +
                                                     std::to_string(n + 1) + " coefficients");
        }
    }
}

FractalSeries2D FractalSeries2D::truncated(int n) const {
    const std::size_t keep = n < 0 ? 0 : std::min(rows_.size(), static_cast<std::size_t>(n) + 1);
    return FractalSeries2D(order_, center_, {rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(keep)});
}

FractalSeries2D taylor2d(const MixedDerivativeOracle& oracle, std::pair<double, double> center,
                         const FractalOrder& order, int degree, Taylor2dNormalization norm) {
    constexpr const char* op = "taylor2d";
    if (degree < 0) throw ConfigError(op, "degree must be nonnegative");
    const double alpha = order.value();
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(degree) + 1);
    for (int n = 0; n <= degree; ++n) {
        auto& row = rows[static_cast<std::size_t>(n)];
        row.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            double d = 0.0;
            try {
                d = oracle(i, n - i);
            } catch (const std::exception& e) {
                throw OracleError(op, "oracle(" + std::to_string(i) + ", " + std::to_string(n - i) +
                                          ") failed: " + e.what());
            }
            if (!std::isfinite(d)) {
                throw OracleError(op, "oracle(" + std::to_string(i) + ", " + std::to_string(n - i) +
                                          ") is not finite");
            }
            if (norm == Taylor2dNormalization::gamma) {
                d *= gamma_ratio(alpha, 0, i) * gamma_ratio(alpha, 0, n - i);
            }
            row[static_cast<std::size_t>(i)] = d;
        }
    }
    return FractalSeries2D(order, center, std::move(rows));
}

double series2d_eval(const FractalSeries2D& s, double x, double y) {
    const auto [x0, y0] = s.center();
    if (!(x >= x0 && y >= y0)) {
        throw DomainError("series2d_eval", "point lies outside the quadrant x >= x0, y >= y0");
    }
    const double alpha = s.order().value();
    detail::CompensatedSum sum;
    for (std::size_t n = 0; n < s.rows().size(); ++n) {
        for (std::size_t i = 0; i <= n; ++i) {
            sum.add(s.rows()[n][i] * fractal_pow(x - x0, static_cast<double>(i) * alpha) *
                    fractal_pow(y - y0, static_cast<double>(n - i) * alpha));
        }
    }
    return sum.value();
}

}  // namespace flc
