#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "flc/fracops.hpp"
#include "flc/special.hpp"

namespace flc {

struct HoelderEstimate {
    double exponent_hat = 0.0;
    double constant_hat = 0.0;
    double fit_residual = 0.0;
    std::size_t pairs_used = 0;
};

/// Pair sampling for Hoelder fits. Separations are (b-a) 2^-j for
/// j = 1..separations; each separation uses `nsamples` evenly spaced base
/// points (both ends included) plus nsamples/2 seeded random ones.
struct HoelderOptions {
    unsigned separations = 12;
    std::uint64_t seed = 0x5eed'f1a7'c0de'0001ULL;
    unsigned threads = 1;
};

/// Fits |f(x) - f(y)| <= zeta |x - y|^alpha on [a, b].
///
/// The exponent is the least-squares slope of log(max |f(x) - f(x+s)|) against
/// log s over the separations, i.e. of the sampled modulus of continuity;
/// pairs with f(x) = f(y) are skipped. The constant is the largest sampled
/// ratio at the fitted exponent. Throws DegenerateDataError with fewer than 8
/// usable pairs or fewer than two usable separations.
HoelderEstimate hoelder_fit(const ScalarFunction& f, double a, double b, std::size_t nsamples,
                            const HoelderOptions& opts = {});

/// Largest sampled |f(x) - f(y)| / |x - y|^exponent over the hoelder_fit pair set.
double hoelder_constant(const ScalarFunction& f, double a, double b, double exponent,
                        std::size_t nsamples, const HoelderOptions& opts = {});

struct ContinuityReport {
    bool is_continuous = false;
    /// 1-D: (x0, x) of the largest ratio. 2-D: the sampled point (x, y).
    std::pair<double, double> worst_pair{0.0, 0.0};
    double worst_ratio = 0.0;
};

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    [[nodiscard]] bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Sampled form of |f(x) - f(x0)| <= C |x - x0|^alpha: for each delta in the
/// descending grid, tests x = x0 +- delta*k/8, k = 1..8, that fall in `domain`.
ContinuityReport lf_continuity_check(const ScalarFunction& f, double x0, const FractalOrder& order,
                                     const std::vector<double>& delta_grid, double bound,
                                     Interval domain = {});

/// Two-variable check in the max norm: samples (x0 + delta*i/4, y0 + delta*j/4)
/// for i, j in -4..4 (not both zero) inside the domain box.
ContinuityReport lf_continuity_check_2d(const ScalarFunction2& f, std::pair<double, double> p0,
                                        const FractalOrder& order,
                                        const std::vector<double>& delta_grid, double bound,
                                        Interval x_domain = {}, Interval y_domain = {});

}  // namespace flc
