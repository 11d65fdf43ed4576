#include "flc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "detail/numeric.hpp"
#include "flc/error.hpp"

namespace flc {

void RelaxationProblem::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("RelaxationProblem", "rate c must be positive");
    if (!std::isfinite(y0)) throw ConfigError("RelaxationProblem", "y0 must be finite");
}

std::vector<double> relax_exact(const RelaxationProblem& prob, const std::vector<double>& t_grid,
                                const SeriesControl& ctl) {
    prob.validate();
    if (t_grid.empty()) throw ConfigError("relax_exact", "time grid is empty");
    std::vector<double> y(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (!(t >= 0.0)) throw DomainError("relax_exact", "time nodes must be nonnegative");
        if (i > 0 && t < t_grid[i - 1]) throw ConfigError("relax_exact", "time grid must be ascending");
        const double w = -fractal_pow(prob.c * t, prob.order.value());
        y[i] = prob.y0 * ml(prob.order, w, ctl).value;
    }
    return y;
}

FractalSeries relax_series(const RelaxationProblem& prob, double t0, int degree) {
    prob.validate();
    if (!(t0 >= 0.0)) throw DomainError("relax_series", "t0 must be nonnegative");
    if (degree < 0) throw ConfigError("relax_series", "degree must be nonnegative");
    const double alpha = prob.order.value();
    const double anchor = prob.y0 * ml(prob.order, -fractal_pow(prob.c * t0, alpha)).value;
    std::vector<double> a(static_cast<std::size_t>(degree) + 1);
    for (int k = 0; k <= degree; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        a[static_cast<std::size_t>(k)] =
            sign * std::pow(prob.c, k * alpha) * anchor * gamma_ratio(alpha, 0, k);
    }
    return FractalSeries(prob.order, t0, std::move(a));
}

std::vector<double> relax_residual(const FractalSeries& s, double c, const FractalOrder& order) {
    const FractalSeries rebased(order, s.center(), s.coeffs());
    const FractalSeries d = series_derivative(rebased);
    const double rate = std::pow(c, order.value());
    const std::size_t n = std::max<std::size_t>(rebased.coeffs().size(), 2) - 1;
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = d.coeff(k) + rate * rebased.coeff(k);
    return r;
}

RelaxationSteps relax_step(const RelaxationProblem& prob, double dt, double t_max) {
    constexpr const char* op = "relax_step";
    prob.validate();
    if (!(dt > 0.0) || !(t_max > 0.0)) throw ConfigError(op, "dt and T must be positive");
    if (dt > t_max) throw ConfigError(op, "dt must not exceed T");
    const double alpha = prob.order.value();
    const double q = std::pow(prob.c * dt, alpha) / std::tgamma(1.0 + alpha);
    if (q >= 2.0) {
        throw StabilityError(op, "c^a dt^a / Gamma(1+a) = " + std::to_string(q) +
                                     " >= 2; iterates grow without bound");
    }
    const auto steps = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12)));
    RelaxationSteps out;
    out.multiplier = 1.0 - q;
    out.stable = std::fabs(out.multiplier) < 1.0;
    out.monotone = out.multiplier > 0.0 && out.multiplier < 1.0;
    out.t.resize(steps + 1);
    out.y.resize(steps + 1);
    out.y[0] = prob.y0;
    for (std::size_t n = 0; n <= steps; ++n) {
        out.t[n] = static_cast<double>(n) * dt;
        if (n > 0) out.y[n] = out.multiplier * out.y[n - 1];
    }
    return out;
}

std::string_view ModelSpec::kind() const {
    switch (model.index()) {
        case 0: return "heat";
        case 1: return "wave";
        default: return "diffusion";
    }
}

double ModelSpec::effective_diffusivity() const {
    if (const auto* h = std::get_if<HeatModel>(&model)) return 1.0 / h->kappa;
    if (const auto* d = std::get_if<DiffusionModel>(&model)) return d->a2alpha;
    return 1.0;
}

void ModelSpec::validate() const {
    constexpr const char* op = "ModelSpec";
    if (const auto* h = std::get_if<HeatModel>(&model)) {
        for (double v : {h->kappa, h->conductivity, h->transfer, h->ambient, h->initial, h->length}) {
            if (!std::isfinite(v)) throw ConfigError(op, "heat coefficients must be finite");
        }
        if (!(h->kappa > 0.0)) throw ConfigError(op, "heat diffusivity kappa must be positive");
        if (!(h->length > 0.0)) throw ConfigError(op, "heat wall length L must be positive");
        if (h->conductivity < 0.0 || h->transfer < 0.0 || h->conductivity + h->transfer <= 0.0) {
            throw ConfigError(op, "need k >= 0, h >= 0 and k + h > 0 for the Robin row");
        }
    } else if (const auto* w = std::get_if<WaveModel>(&model)) {
        if (!w->rate_profile) throw ConfigError(op, "wave model needs an initial-rate profile phi");
    } else if (const auto* d = std::get_if<DiffusionModel>(&model)) {
        if (!(d->a2alpha > 0.0) || !std::isfinite(d->a2alpha)) {
            throw ConfigError(op, "diffusion coefficient must be positive");
        }
        if (!d->initial_profile) throw ConfigError(op, "diffusion model needs an initial profile");
    }
}

double stability_ratio(const ModelSpec& model, double dx, double dt) {
    const double alpha = model.order.value();
    return model.effective_diffusivity() * std::tgamma(1.0 + alpha) * std::pow(dt, alpha) /
           std::pow(dx, 2.0 * alpha);
}

namespace {

double uniform_spacing(const std::vector<double>& nodes, const char* what) {
    const double h = nodes[1] - nodes[0];
    if (!(h > 0.0)) throw ConfigError("pde_solve", std::string(what) + " nodes must ascend");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (std::fabs((nodes[i] - nodes[i - 1]) - h) > 1e-9 * h) {
            throw ConfigError("pde_solve", std::string(what) + " nodes must be uniformly spaced");
        }
    }
    return h;
}

double sample(const ScalarFunction& f, double x) {
    double v = 0.0;
    try {
        v = f(x);
    } catch (const std::exception& e) {
        throw EvaluationError("pde_solve", "profile at x = " + std::to_string(x) + " failed: " + e.what());
    }
    if (!std::isfinite(v)) throw EvaluationError("pde_solve", "profile is not finite at x = " + std::to_string(x));
    return v;
}

}  // namespace

GridFunction pde_solve(const ModelSpec& model, const std::vector<double>& x_nodes,
                       const std::vector<double>& t_nodes, const PdeOptions& opts) {
    constexpr const char* op = "pde_solve";
    model.validate();
    if (x_nodes.size() < 3) throw ConfigError(op, "need at least three space nodes");
    if (t_nodes.empty()) throw ConfigError(op, "time grid is empty");
    const double dx = uniform_spacing(x_nodes, "space");
    const double dt = t_nodes.size() > 1 ? uniform_spacing(t_nodes, "time") : 0.0;

    const double alpha = model.order.value();
    const double g = std::tgamma(1.0 + alpha);
    const std::size_t nx = x_nodes.size();
    const std::size_t last = nx - 1;

    const auto* heat = std::get_if<HeatModel>(&model.model);
    if (heat != nullptr) {
        const double tol = 1e-9 * heat->length;
        if (std::fabs(x_nodes.front()) > tol || std::fabs(x_nodes.back() - heat->length) > tol) {
            throw ConfigError(op, "heat model grid must span [0, L]");
        }
    }
    const double r = t_nodes.size() > 1 ? stability_ratio(model, dx, dt) : 0.0;
    if (opts.enforce_stability && r > 0.5) {
        throw ConfigError(op, "stability ratio " + std::to_string(r) + " exceeds 1/2");
    }

    GridFunction out{x_nodes, t_nodes, std::vector<double>(nx * t_nodes.size())};
    std::vector<double> u(nx);
    if (heat != nullptr) {
        std::fill(u.begin(), u.end(), heat->initial);
    } else if (const auto* d = std::get_if<DiffusionModel>(&model.model)) {
        for (std::size_t j = 0; j < nx; ++j) u[j] = sample(d->initial_profile, x_nodes[j]);
    } else {
        const auto& w = std::get<WaveModel>(model.model);
        for (std::size_t j = 0; j < nx; ++j) {
            u[j] = w.initial_profile ? sample(w.initial_profile, x_nodes[j]) : 0.0;
        }
    }
    std::copy(u.begin(), u.end(), out.values.begin());

    std::vector<double> rate;
    if (const auto* w = std::get_if<WaveModel>(&model.model)) {
        rate.resize(nx);
        for (std::size_t j = 0; j < nx; ++j) rate[j] = sample(w->rate_profile, x_nodes[j]);
    }
    const double time_scale = std::pow(dt, alpha) / g;

    std::vector<double> next(nx);
    for (std::size_t n = 1; n < t_nodes.size(); ++n) {
        if (n == 1 && !rate.empty()) {
            // The prescribed d^a y/dt^a at t = 0 drives the first step.
            detail::parallel_for(nx - 2, opts.threads, [&](std::size_t i) {
                const std::size_t j = i + 1;
                next[j] = u[j] + time_scale * rate[j];
            });
        } else {
            detail::parallel_for(nx - 2, opts.threads, [&](std::size_t i) {
                const std::size_t j = i + 1;
                next[j] = u[j] + r * (u[j + 1] - 2.0 * u[j] + u[j - 1]);
            });
        }
        if (heat != nullptr) {
            next[0] = next[1];
            const double flux = heat->conductivity * g;
            const double robin = heat->transfer * std::pow(dx, alpha);
            next[last] = (flux * next[last - 1] + robin * heat->ambient) / (flux + robin);
        } else {
            next[0] = 0.0;
            next[last] = 0.0;
        }
        for (std::size_t j = 0; j < nx; ++j) {
            if (!std::isfinite(next[j])) {
                throw StabilityError(op, "non-finite value at t = " + std::to_string(t_nodes[n]) +
                                             ", x = " + std::to_string(x_nodes[j]));
            }
        }
        u.swap(next);
        std::copy(u.begin(), u.end(), out.values.begin() + static_cast<std::ptrdiff_t>(n * nx));
    }
    return out;
}

}  // namespace flc
