#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "flc/fracops.hpp"
#include "flc/series.hpp"
#include "flc/special.hpp"

namespace flc {

/// y^(alpha)(t) + c^alpha y(t) = 0, y(0) = y0, c > 0.
struct RelaxationProblem {
    FractalOrder order{1.0};
    double c = 1.0;
    double y0 = 1.0;

    void validate() const;
};

/// y0 * E_alpha(-(c t)^alpha) at every node; y(0) = y0 exactly.
std::vector<double> relax_exact(const RelaxationProblem& prob, const std::vector<double>& t_grid,
                                const SeriesControl& ctl = {});

/// Expansion about t0 in powers (t - t0)^(k alpha):
///   a_k = y0 (-1)^k c^(k alpha) E_alpha(-(c t0)^alpha) / Gamma(1 + k alpha).
/// Only exact for alpha = 1 or t0 = 0; elsewhere it inherits the
/// semigroup defect of E_alpha.
FractalSeries relax_series(const RelaxationProblem& prob, double t0, int degree);

/// Coefficients of D(s) + c^alpha s over indices 0..max(deg s, 1) - 1; the
/// top coefficient of s has no derivative counterpart and is left out.
std::vector<double> relax_residual(const FractalSeries& s, double c, const FractalOrder& order);

struct RelaxationSteps {
    std::vector<double> t;
    std::vector<double> y;
    /// 1 - c^alpha dt^alpha / Gamma(1 + alpha), the per-step multiplier.
    double multiplier = 1.0;
    /// |multiplier| < 1.
    bool stable = true;
    /// 0 < multiplier < 1: iterates keep their sign and decay monotonically.
    bool monotone = true;
};

/// Explicit stepper y_{n+1} = y_n - c^alpha dt^alpha / Gamma(1+alpha) y_n,
/// sampled at n dt for n = 0..floor(T/dt). Throws StabilityError when
/// c^alpha dt^alpha / Gamma(1+alpha) >= 2.
RelaxationSteps relax_step(const RelaxationProblem& prob, double dt, double t_max);

/// d^{2a}y/dx^{2a} = kappa d^a y/dt^a on
/// [0, L], zero alpha-flux at x = 0 and the Robin row
/// k d^a y/dx^a + h (y - y_inf) = 0 at x = L, y(x, 0) = y_i.
struct HeatModel {
    double kappa = 1.0;
    double conductivity = 1.0;
    double transfer = 0.0;
    double ambient = 0.0;
    double initial = 0.0;
    double length = 1.0;
};

/// d^a y/dt^a = d^{2a} y/dx^{2a}, zero far field, d^a y/dt^a (0, x) = phi(x).
struct WaveModel {
    ScalarFunction rate_profile;
    /// y(0, x); zero when empty.
    ScalarFunction initial_profile;
};

/// d^a y/dt^a = a2alpha d^{2a} y/dx^{2a}, zero far field, y(0, x) = phi(x).
struct DiffusionModel {
    double a2alpha = 1.0;
    ScalarFunction initial_profile;
};

struct ModelSpec {
    FractalOrder order{1.0};
    std::variant<HeatModel, WaveModel, DiffusionModel> model;

    [[nodiscard]] std::string_view kind() const;
    /// Coefficient multiplying the spatial operator once the time derivative
    /// is isolated: 1/kappa, 1, or a2alpha.
    [[nodiscard]] double effective_diffusivity() const;
    void validate() const;
};

/// Row-major samples, one row per time node.
struct GridFunction {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t ti, std::size_t xi) const {
        return values[ti * x_nodes.size() + xi];
    }
};

struct PdeOptions {
    /// Reject grids whose stability ratio exceeds 1/2.
    bool enforce_stability = true;
    unsigned threads = 1;
};

/// r = D_eff Gamma(1+alpha) dt^alpha / dx^(2 alpha); r <= 1/2 is the
/// classical explicit limit at alpha = 1.
double stability_ratio(const ModelSpec& model, double dx, double dt);

/// Explicit scheme with time stencil Gamma(1+a)(u^{n+1} - u^n)/dt^a and space
/// stencil Gamma(1+a)^2 (u_{j+1} - 2u_j + u_{j-1})/dx^{2a}. Throws ConfigError
/// for non-uniform or inconsistent grids, StabilityError on non-finite values.
GridFunction pde_solve(const ModelSpec& model, const std::vector<double>& x_nodes,
                       const std::vector<double>& t_nodes, const PdeOptions& opts = {});

}  // namespace flc
