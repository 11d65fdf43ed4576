#include "flc/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "detail/numeric.hpp"
#include "flc/error.hpp"

namespace flc {

namespace {

double evaluate(const ScalarFunction& f, double x, const char* op) {
    double v = 0.0;
    try {
        v = f(x);
    } catch (const std::exception& e) {
        throw EvaluationError(op, "f(" + std::to_string(x) + ") failed: " + e.what());
    }
    if (!std::isfinite(v)) {
        throw EvaluationError(op, "f(" + std::to_string(x) + ") is not finite");
    }
    return v;
}

double evaluate2(const ScalarFunction2& f, double x, double y, const char* op) {
    return evaluate([&](double xx) { return f(xx, y); }, x, op);
}

// Aitken delta-squared on the last three per-step values. Leaves the last
// value alone when the sequence has already settled or does not contract.
double extrapolate(const std::vector<double>& v, double tol) {
    const std::size_t n = v.size();
    if (n < 3) return v.back();
    const double d1 = v[n - 3] - v[n - 2];
    const double d2 = v[n - 2] - v[n - 1];
    if (std::fabs(d2) <= tol * std::max(1.0, std::fabs(v.back()))) return v.back();
    const double q = d2 / d1;
    if (!std::isfinite(q) || !(q > 0.0 && q < 0.95)) return v.back();
    return v.back() - d2 * q / (1.0 - q);
}

DerivativeEstimate finish(std::vector<double> steps, std::vector<double> values, double tol) {
    DerivativeEstimate est;
    est.value = extrapolate(values, tol);
    const std::size_t n = values.size();
    est.converged = n >= 2 && std::fabs(values[n - 1] - values[n - 2]) <
                                  tol * std::max(1.0, std::fabs(values[n - 1]));
    est.steps = std::move(steps);
    est.per_step_values = std::move(values);
    return est;
}

// Second-order quotient from the increments over h and 2h.
double second_quotient(double d_h, double d_2h, double h, double alpha) {
    const double p = std::pow(2.0, alpha);
    return std::tgamma(1.0 + 2.0 * alpha) * (d_2h - p * d_h) /
           ((p * p - p) * std::pow(h, 2.0 * alpha));
}

}  // namespace

void StepSchedule::validate() const {
    if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("StepSchedule", "h0 must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("StepSchedule", "ratio must lie in (0, 1)");
    if (count == 0) throw ConfigError("StepSchedule", "count must be at least 1");
    if (!(tolerance > 0.0)) throw ConfigError("StepSchedule", "tolerance must be positive");
}

std::vector<double> StepSchedule::steps() const {
    validate();
    std::vector<double> h(count);
    for (std::size_t j = 0; j < count; ++j) {
        h[j] = h0 * std::pow(ratio, static_cast<double>(j));
    }
    return h;
}

DerivativeEstimate lf_derivative_fd(const ScalarFunction& f, double x0, const FractalOrder& order,
                                    const StepSchedule& sched) {
    constexpr const char* op = "lf_derivative_fd";
    const double alpha = order.value();
    const double g = std::tgamma(1.0 + alpha);
    auto steps = sched.steps();
    const double f0 = evaluate(f, x0, op);
    std::vector<double> values;
    values.reserve(steps.size());
    for (double h : steps) {
        values.push_back(g * (evaluate(f, x0 + h, op) - f0) / std::pow(h, alpha));
    }
    return finish(std::move(steps), std::move(values), sched.tolerance);
}

DerivativeEstimate lf_derivative_iterated(const ScalarFunction& f, double x0,
                                          const FractalOrder& order, int times,
                                          std::optional<StepSchedule> sched) {
    constexpr const char* op = "lf_derivative_iterated";
    if (times == 1) return lf_derivative_fd(f, x0, order, sched.value_or(StepSchedule{}));
    if (times != 2) {
        throw UnsupportedOrder(op, "finite differences support 1 or 2 applications, got " +
                                       std::to_string(times) + "; use the series route");
    }
    const StepSchedule s = sched.value_or(StepSchedule::second_order());
    const double alpha = order.value();
    auto steps = s.steps();
    const double f0 = evaluate(f, x0, op);
    std::vector<double> values;
    values.reserve(steps.size());
    for (double h : steps) {
        const double d_h = evaluate(f, x0 + h, op) - f0;
        const double d_2h = evaluate(f, x0 + 2.0 * h, op) - f0;
        values.push_back(second_quotient(d_h, d_2h, h, alpha));
    }
    return finish(std::move(steps), std::move(values), s.tolerance);
}

PartitionScheme PartitionScheme::uniform(std::size_t cells) {
    if (cells == 0) throw ConfigError("PartitionScheme", "uniform partition needs at least one cell");
    return PartitionScheme(Kind::uniform, cells, 0, 1.0);
}

PartitionScheme PartitionScheme::cantor(unsigned stage, double ratio) {
    if (!(ratio > 0.0 && ratio <= 0.5)) {
        throw ConfigError("PartitionScheme", "cantor ratio must lie in (0, 1/2]");
    }
    if (stage > 24) throw ConfigError("PartitionScheme", "cantor stage above 24 is not supported");
    return PartitionScheme(Kind::cantor, std::size_t{1} << stage, stage, ratio);
}

std::size_t PartitionScheme::cell_count() const noexcept { return n_; }

double PartitionScheme::dimension() const {
    return kind_ == Kind::uniform ? 1.0 : std::log(2.0) / std::log(1.0 / ratio_);
}

std::pair<std::vector<double>, double> PartitionScheme::cells(double a, double b) const {
    const double width = b - a;
    if (kind_ == Kind::uniform) {
        std::vector<double> left(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            left[j] = a + width * static_cast<double>(j) / static_cast<double>(n_);
        }
        return {std::move(left), width / static_cast<double>(n_)};
    }
    std::vector<double> left{a};
    left.reserve(n_);
    double length = width;
    for (unsigned s = 0; s < stage_; ++s) {
        const double shift = (1.0 - ratio_) * length;
        std::vector<double> next;
        next.reserve(left.size() * 2);
        for (double l : left) {
            next.push_back(l);
            next.push_back(l + shift);
        }
        left = std::move(next);
        length *= ratio_;
    }
    return {std::move(left), length};
}

IntegralResult lf_integral(const ScalarFunction& f, double a, double b, const FractalOrder& order,
                           const PartitionScheme& part, unsigned threads) {
    constexpr const char* op = "lf_integral";
    if (!(a < b)) throw ConfigError(op, "requires a < b");
    const double alpha = order.value();
    auto [left, length] = part.cells(a, b);
    const double measure = std::pow(length, alpha);

    std::vector<double> terms(left.size());
    detail::parallel_for(left.size(), threads,
                         [&](std::size_t j) { terms[j] = evaluate(f, left[j], op) * measure; });

    IntegralResult r;
    r.value = detail::pairwise_sum(terms) / std::tgamma(1.0 + alpha);
    r.cells = left.size();
    r.divergence_warning = part.kind() == PartitionScheme::Kind::uniform && alpha < 1.0;
    return r;
}

DerivativeEstimate lf_partial_fd(const ScalarFunction2& f, std::pair<double, double> point,
                                 const FractalOrder& order, const std::vector<Axis>& axes,
                                 std::optional<StepSchedule> sched) {
    constexpr const char* op = "lf_partial_fd";
    if (axes.empty() || axes.size() > 2) {
        throw UnsupportedOrder(op, "finite differences support one or two axes; use the series route");
    }
    const auto [x0, y0] = point;
    const double alpha = order.value();
    const double g = std::tgamma(1.0 + alpha);
    auto shifted = [&](Axis axis, double px, double py, double h) {
        return axis == Axis::x ? evaluate2(f, px + h, py, op) : evaluate2(f, px, py + h, op);
    };

    if (axes.size() == 1) {
        const StepSchedule s = sched.value_or(StepSchedule{});
        auto steps = s.steps();
        const double f0 = evaluate2(f, x0, y0, op);
        std::vector<double> values;
        for (double h : steps) {
            values.push_back(g * (shifted(axes[0], x0, y0, h) - f0) / std::pow(h, alpha));
        }
        return finish(std::move(steps), std::move(values), s.tolerance);
    }

    const StepSchedule s = sched.value_or(StepSchedule::second_order());
    auto steps = s.steps();
    std::vector<double> values;
    if (axes[0] == axes[1]) {
        const double f0 = evaluate2(f, x0, y0, op);
        for (double h : steps) {
            const double d_h = shifted(axes[0], x0, y0, h) - f0;
            const double d_2h = shifted(axes[0], x0, y0, 2.0 * h) - f0;
            values.push_back(second_quotient(d_h, d_2h, h, alpha));
        }
    } else {
        const Axis outer = axes[0];
        const Axis inner = axes[1];
        for (double h : steps) {
            const double ha = std::pow(h, alpha);
            auto inner_quotient = [&](double px, double py) {
                return g * (shifted(inner, px, py, h) - evaluate2(f, px, py, op)) / ha;
            };
            const double base = inner_quotient(x0, y0);
            const double moved = outer == Axis::x ? inner_quotient(x0 + h, y0) : inner_quotient(x0, y0 + h);
            values.push_back(g * (moved - base) / ha);
        }
    }
    return finish(std::move(steps), std::move(values), s.tolerance);
}

double cantor_staircase(double x, unsigned stage) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("cantor_staircase", "x must lie in [0, 1], got " + std::to_string(x));
    }
    double value = 0.0;
    double scale = 1.0;
    for (unsigned s = 0; s < stage; ++s) {
        if (x <= 1.0 / 3.0) {
            x = 3.0 * x;
        } else if (x < 2.0 / 3.0) {
            return value + 0.5 * scale;
        } else {
            value += 0.5 * scale;
            x = 3.0 * x - 2.0;
        }
        x = std::clamp(x, 0.0, 1.0);
        scale *= 0.5;
    }
    return value + scale * x;
}

}  // namespace flc
