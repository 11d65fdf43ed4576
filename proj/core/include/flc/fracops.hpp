#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "flc/special.hpp"

namespace flc {

using ScalarFunction = std::function<double(double)>;
using ScalarFunction2 = std::function<double(double, double)>;

/// Geometric step sequence h_j = h0 * ratio^j, j = 0..count-1, driving the
/// limit x -> x0 of the difference quotients.
struct StepSchedule {
    double h0 = 1e-1;
    double ratio = 0.5;
    std::size_t count = 20;
    /// Relative tolerance on the last two per-step values.
    double tolerance = 1e-8;

    /// Default for second-order quotients: stops near h = 2e-4 where the
    /// h^(-2 alpha) roundoff amplification is still below 1e-7.
    static StepSchedule second_order() { return StepSchedule{1e-1, 0.5, 10, 1e-8}; }

    void validate() const;
    [[nodiscard]] std::vector<double> steps() const;
};

struct DerivativeEstimate {
    double value = 0.0;
    std::vector<double> steps;
    std::vector<double> per_step_values;
    bool converged = false;
};

/// Forward local fractional difference quotient
/// Gamma(1+alpha) * (f(x0+h) - f(x0)) / h^alpha over the schedule, followed by
/// an Aitken extrapolation of the per-step values when they contract
/// geometrically.
DerivativeEstimate lf_derivative_fd(const ScalarFunction& f, double x0, const FractalOrder& order,
                                    const StepSchedule& sched = {});

/// times = 1 is lf_derivative_fd. times = 2 eliminates the h^alpha term of the
/// generalized Taylor expansion from the increments over h and 2h:
///   Gamma(1+2a) * (D(2h) - 2^a D(h)) / ((4^a - 2^a) h^(2a)),  D(h) = f(x0+h) - f(x0),
/// which is the nested forward quotient at alpha = 1.
/// Throws UnsupportedOrder for times > 2.
DerivativeEstimate lf_derivative_iterated(const ScalarFunction& f, double x0,
                                          const FractalOrder& order, int times,
                                          std::optional<StepSchedule> sched = std::nullopt);

class PartitionScheme {
public:
    enum class Kind { uniform, cantor };

    static PartitionScheme uniform(std::size_t cells);
    /// Stage-n generalized Cantor construction keeping the outer fraction
    /// `ratio` of every interval on each side.
    static PartitionScheme cantor(unsigned stage, double ratio = 1.0 / 3.0);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t cell_count() const noexcept;
    [[nodiscard]] unsigned stage() const noexcept { return stage_; }
    [[nodiscard]] double ratio() const noexcept { return ratio_; }
    /// ln2 / ln(1/ratio) for cantor partitions, 1 for uniform ones.
    [[nodiscard]] double dimension() const;

    /// Left endpoints of the cells of [a, b], ascending, and the common cell length.
    [[nodiscard]] std::pair<std::vector<double>, double> cells(double a, double b) const;

private:
    PartitionScheme(Kind kind, std::size_t n, unsigned stage, double ratio)
        : kind_(kind), n_(n), stage_(stage), ratio_(ratio) {}

    Kind kind_;
    std::size_t n_;
    unsigned stage_;
    double ratio_;
};

struct IntegralResult {
    double value = 0.0;
    std::size_t cells = 0;
    /// Set for uniform partitions at alpha < 1, where the sum grows like N^(1-alpha).
    bool divergence_warning = false;
};

/// (1/Gamma(1+alpha)) * sum_j f(t_j) (dt_j)^alpha over the partition cells,
/// with t_j the left endpoint of cell j. The terms are reduced pairwise in a
/// fixed order, so the value does not depend on `threads`.
IntegralResult lf_integral(const ScalarFunction& f, double a, double b, const FractalOrder& order,
                           const PartitionScheme& part, unsigned threads = 1);

enum class Axis { x, y };

/// Local fractional partial derivative at `point`. One axis: the forward
/// quotient along it. Two distinct axes: the nested quotient, outer axis
/// first. The same axis twice: the second-order quotient of
/// lf_derivative_iterated along that axis. Throws UnsupportedOrder otherwise.
DerivativeEstimate lf_partial_fd(const ScalarFunction2& f, std::pair<double, double> point,
                                 const FractalOrder& order, const std::vector<Axis>& axes,
                                 std::optional<StepSchedule> sched = std::nullopt);

/// Stage-n approximation of the middle-thirds Cantor function: piecewise linear
/// on the 2^n surviving intervals, constant on the removed ones.
double cantor_staircase(double x, unsigned stage);

}  // namespace flc
