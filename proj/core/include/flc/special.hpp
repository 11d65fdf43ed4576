#pragma once

#include <cstddef>
#include <vector>

namespace flc {

/// Fractal order alpha in (0, 1].
class FractalOrder {
public:
    /// Throws DomainError unless 0 < alpha <= 1.
    explicit FractalOrder(double alpha);

    /// ln2 / ln3, the dimension of the middle-thirds Cantor set.
    static FractalOrder cantor();

    [[nodiscard]] double value() const noexcept { return alpha_; }

    /// Gamma(1 + k*alpha) for k = 0..n.
    [[nodiscard]] std::vector<double> gamma_ladder(std::size_t n) const;

    friend bool operator==(const FractalOrder&, const FractalOrder&) = default;

private:
    double alpha_;
};

inline constexpr double kCantorDimension = 0.63092975357145743710;

struct SeriesControl {
    double abs_tol = 1e-14;
    std::size_t max_terms = 400;

    /// Throws ConfigError for abs_tol <= 0 or max_terms == 0.
    void validate() const;
};

/// Gamma function. Throws PoleError at zero and negative integers.
double gamma(double x);

/// Gamma(1 + num*alpha) / Gamma(1 + den*alpha), evaluated in extended precision
/// so that ladders of high order do not overflow.
double gamma_ratio(double alpha, int num, int den);

struct MlResult {
    double value = 0.0;
    std::size_t terms = 0;
    /// Largest |term| seen; value error is roughly max_term * 1e-19.
    double max_term = 0.0;
};

/// One-parameter Mittag-Leffler series sum_k w^k / Gamma(1 + k*alpha).
///
/// E_alpha(x^alpha) is ml(alpha, fractal_pow(x, alpha)). The sum stops at the
/// first k with |term_k| < abs_tol and |term_{k+1}| <= |term_k|; it throws
/// TruncationError when max_terms is reached first.
MlResult ml(const FractalOrder& order, double w, const SeriesControl& ctl = {});

/// x^p for x >= 0, with 0^0 = 1. Throws DomainError for x < 0 or p < 0.
double fractal_pow(double x, double p);

/// |E((x+y)^alpha) - E(x^alpha) * E(y^alpha)|; zero only at alpha = 1.
double ml_semigroup_defect(const FractalOrder& order, double x, double y,
                           const SeriesControl& ctl = {});

}  // namespace flc
