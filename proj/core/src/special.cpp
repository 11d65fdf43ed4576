#include "flc/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flc/error.hpp"

namespace flc {

FractalOrder::FractalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("FractalOrder", "alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
}

FractalOrder FractalOrder::cantor() { return FractalOrder(std::log(2.0) / std::log(3.0)); }

std::vector<double> FractalOrder::gamma_ladder(std::size_t n) const {
    std::vector<double> ladder(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        ladder[k] = std::tgamma(1.0 + static_cast<double>(k) * alpha_);
    }
    return ladder;
}

void SeriesControl::validate() const {
    if (!(abs_tol > 0.0)) throw ConfigError("SeriesControl", "abs_tol must be positive");
    if (max_terms == 0) throw ConfigError("SeriesControl", "max_terms must be at least 1");
}

double gamma(double x) {
    if (x <= 0.0 && std::floor(x) == x) {
        throw PoleError("gamma", "pole at x = " + std::to_string(x));
    }
    return std::tgamma(x);
}

double gamma_ratio(double alpha, int num, int den) {
    const long double a = alpha;
    const long double top = std::tgamma(1.0L + num * a);
    const long double bottom = std::tgamma(1.0L + den * a);
    if (std::isfinite(top) && std::isfinite(bottom)) {
        return static_cast<double>(top / bottom);
    }
    return static_cast<double>(std::exp(std::lgamma(1.0L + num * a) - std::lgamma(1.0L + den * a)));
}

namespace {

// 1/Gamma(1 + k*alpha) for k < n, cached per thread for the last alpha seen.
const std::vector<long double>& inverse_gammas(long double alpha, std::size_t n) {
    thread_local long double cached_alpha = -1.0L;
    thread_local std::vector<long double> table;
    if (cached_alpha != alpha) {
        table.clear();
        cached_alpha = alpha;
    }
    while (table.size() < n) {
        const auto k = static_cast<long double>(table.size());
        table.push_back(1.0L / std::tgamma(1.0L + k * alpha));
    }
    return table;
}

}  // namespace

MlResult ml(const FractalOrder& order, double w, const SeriesControl& ctl) {
    ctl.validate();
    if (!std::isfinite(w)) throw DomainError("ml", "argument must be finite");

    const long double alpha = order.value();
    const long double wl = w;
    const long double aw = std::fabs(wl);
    const auto& inv_gamma = inverse_gammas(alpha, ctl.max_terms + 1);
    // |w|^k / Gamma(1 + k*alpha) with the sign of w^k.
    long double power = 1.0L;
    auto term_at = [&](std::size_t k) -> long double {
        if (k == 0) return 1.0L;
        if (wl == 0.0L) return 0.0L;
        power *= aw;
        long double magnitude = power * inv_gamma[k];
        if (!std::isfinite(power) || !(inv_gamma[k] > 0.0L)) {
            const auto kk = static_cast<long double>(k);
            magnitude = std::exp(kk * std::log(aw) - std::lgamma(1.0L + kk * alpha));
        }
        return (wl < 0.0L && (k % 2 == 1)) ? -magnitude : magnitude;
    };

    // Neumaier compensated sum.
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double max_term = 0.0L;
    long double term = term_at(0);
    for (std::size_t k = 0; k < ctl.max_terms; ++k) {
        const long double next = term_at(k + 1);
        const long double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        max_term = std::max(max_term, std::fabs(term));
        if (std::fabs(term) < ctl.abs_tol && std::fabs(next) <= std::fabs(term)) {
            return MlResult{static_cast<double>(sum + comp), k + 1, static_cast<double>(max_term)};
        }
        term = next;
    }
    throw TruncationError("ml", "series did not reach abs_tol within " +
                                    std::to_string(ctl.max_terms) + " terms (w = " +
                                    std::to_string(w) + ")");
}

double fractal_pow(double x, double p) {
    if (x < 0.0 || std::isnan(x)) {
        throw DomainError("fractal_pow", "negative base " + std::to_string(x));
    }
    if (p < 0.0 || std::isnan(p)) {
        throw DomainError("fractal_pow", "negative exponent " + std::to_string(p));
    }
    if (p == 0.0) return 1.0;
    return std::pow(x, p);
}

double ml_semigroup_defect(const FractalOrder& order, double x, double y,
                           const SeriesControl& ctl) {
    if (x < 0.0 || y < 0.0) {
        throw DomainError("ml_semigroup_defect", "arguments must be nonnegative");
    }
    const double a = order.value();
    const double joint = ml(order, fractal_pow(x + y, a), ctl).value;
    const double split = ml(order, fractal_pow(x, a), ctl).value * ml(order, fractal_pow(y, a), ctl).value;
    return std::fabs(joint - split);
}

}  // namespace flc
