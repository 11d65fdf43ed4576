#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "flc/fracops.hpp"
#include "flc/special.hpp"

namespace flc {

/// Finite fractal power series sum_k a_k (x - x0)^(k*alpha).
///
/// Immutable. Trailing coefficients with |a_k| < 1e-300 are stripped on
/// construction, so the zero series has no coefficients at all.
class FractalSeries {
public:
    FractalSeries(FractalOrder order, double x0, std::vector<double> coeffs);

    [[nodiscard]] const FractalOrder& order() const noexcept { return order_; }
    [[nodiscard]] double alpha() const noexcept { return order_.value(); }
    [[nodiscard]] double center() const noexcept { return x0_; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    /// Coefficient k, or 0 past the end.
    [[nodiscard]] double coeff(std::size_t k) const noexcept {
        return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }
    /// Highest retained power index; -1 for the zero series.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }

private:
    FractalOrder order_;
    double x0_;
    std::vector<double> coeffs_;
};

inline constexpr int kDefaultSeriesDegree = 32;

/// Compensated ascending-k evaluation. Throws DomainError for x < x0.
double series_eval(const FractalSeries& s, double x);

/// b_{k-1} = a_k Gamma(1+k alpha) / Gamma(1+(k-1) alpha).
FractalSeries series_derivative(const FractalSeries& s);

/// b_0 = 0, b_{k+1} = a_k Gamma(1+k alpha) / Gamma(1+(k+1) alpha).
FractalSeries series_antiderivative(const FractalSeries& s);

/// a_k = derivs[k] / Gamma(1 + k alpha). Throws ConfigError when derivs is empty.
FractalSeries taylor_from_derivatives(const std::vector<double>& derivs, const FractalOrder& order,
                                      double x0);

/// f(x) - series_eval(s, x).
double taylor_remainder(const ScalarFunction& f, const FractalSeries& s, double x);

struct MvtWitness {
    double xi = 0.0;
    double residual = 0.0;
};

/// Finds xi in (x0, x) with
///   f(x) - f(x0) = falpha(xi) (x - x0)^alpha / Gamma(1 + alpha)
/// to within 1e-9 * max(1, |f(x) - f(x0)|): scans `samples` interior points,
/// then bisects the first sign change. Throws NoWitnessError when the
/// residual neither vanishes nor changes sign on the scan.
MvtWitness mvt_locate(const ScalarFunction& f, const ScalarFunction& falpha, double x0, double x,
                      const FractalOrder& order, std::size_t samples = 999);

/// Triangular two-variable series; row n holds c_{i, n-i} for i = 0..n and
/// multiplies (x - x0)^(i alpha) (y - y0)^((n-i) alpha).
class FractalSeries2D {
public:
    FractalSeries2D(FractalOrder order, std::pair<double, double> center,
                    std::vector<std::vector<double>> rows);

    [[nodiscard]] const FractalOrder& order() const noexcept { return order_; }
    [[nodiscard]] std::pair<double, double> center() const noexcept { return center_; }
    [[nodiscard]] const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(rows_.size()) - 1; }
    /// Same series cut at total degree n.
    [[nodiscard]] FractalSeries2D truncated(int n) const;

private:
    FractalOrder order_;
    std::pair<double, double> center_;
    std::vector<std::vector<double>> rows_;
};

/// Supplies d^{(i+j) alpha} f / dx^{i alpha} dy^{j alpha} at the expansion center.
using MixedDerivativeOracle = std::function<double(int i, int j)>;

enum class Taylor2dNormalization {
    /// c_{i,j} = D_{i,j} / (Gamma(1+i alpha) Gamma(1+j alpha)); classical at alpha = 1.
    gamma,
    /// c_{i,j} = D_{i,j}, no gamma factors.
    unnormalized,
};

/// Throws OracleError when the oracle throws or returns a non-finite value.
FractalSeries2D taylor2d(const MixedDerivativeOracle& oracle, std::pair<double, double> center,
                         const FractalOrder& order, int degree,
                         Taylor2dNormalization norm = Taylor2dNormalization::gamma);

/// Throws DomainError unless x >= x0 and y >= y0.
double series2d_eval(const FractalSeries2D& s, double x, double y);

}  // namespace flc
