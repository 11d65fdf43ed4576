#include "flc_cli/dispatch.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "flc/analysis.hpp"
#include "flc/error.hpp"
#include "flc/expr.hpp"
#include "flc/fracops.hpp"
#include "flc/series.hpp"
#include "flc/solvers.hpp"
#include "flc/special.hpp"
#include "flc_cli/emit.hpp"

namespace flc::cli {

namespace {

struct Options {
    double alpha = 1.0;
    bool alpha_cantor = false;
    std::string format;
    std::string out_path;
    unsigned threads = 1;

    std::string expr;
    std::string expr_y;
    std::string combine = "sum";
    double constant = 0.0;
    unsigned staircase = 0;
    std::string special;
    double power = 1.0;

    std::string x_list;
    std::string y_list;
    std::string t_list;
    std::string t_grid;
    std::string deltas = "0.1,0.01,0.001,0.0001";
    double a = 0.0;
    double b = 1.0;
    int steps = 10;

    std::size_t uniform = 0;
    unsigned cantor = 0;
    unsigned stage = 12;
    double ratio = 1.0 / 3.0;

    double x0 = 0.0;
    std::vector<double> point;
    int times = 1;
    std::string axes;
    double h0 = 0.1;
    double step_ratio = 0.5;
    std::size_t step_count = 20;
    double tol = 1e-8;
    bool trace = false;

    int degree = 8;
    std::string series_op = "none";
    std::vector<double> eval_at;
    double mvt = 0.0;
    bool strict = false;

    bool continuity = false;
    double bound = 1.0;
    double exponent = 0.0;
    std::size_t nsamples = 256;
    std::uint64_t seed = HoelderOptions{}.seed;
    unsigned separations = 12;

    double c = 1.0;
    double y0 = 1.0;
    double t_max = 1.0;
    double t0 = 0.0;
    double dt = 0.0;
    std::string method = "exact";
    bool residual = false;
    bool relax = false;

    std::string model;
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t nx = 101;
    double kappa = 1.0;
    double conductivity = 1.0;
    double transfer = 0.0;
    double ambient = 0.0;
    double initial = 0.0;
    double length = 1.0;
    double a2alpha = 1.0;
    std::string profile;
    std::string rate;
    double width = 0.5;
    bool override_stability = false;
    std::size_t stride = 1;
};

/// Parsed command state; `sub` is the chosen subcommand.
struct Context {
    Options o;
    CLI::App* sub = nullptr;

    [[nodiscard]] bool given(const std::string& name) const {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    }
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        std::string_view item(text.data() + pos, end - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) {
            if (text.find_first_not_of(' ') == std::string::npos) break;
            throw UsageError(std::string(what) + ": empty list entry");
        }
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw UsageError(std::string(what) + ": '" + std::string(item) + "' is not a number");
        }
        out.push_back(v);
        pos = end + 1;
    }
    if (out.empty()) throw UsageError(std::string(what) + " is empty");
    return out;
}

FractalOrder order_of(const Context& ctx) {
    if (ctx.o.alpha_cantor) return FractalOrder::cantor();
    if (!ctx.given("--alpha")) throw UsageError("--alpha or --alpha-cantor is required");
    try {
        return FractalOrder(ctx.o.alpha);
    } catch (const Error& e) {
        throw UsageError(std::string("--alpha: ") + e.what());
    }
}

std::vector<double> linspace(double a, double b, int steps) {
    std::vector<double> v(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / steps;
    return v;
}

// ------------------------------------------------------------ function sources

ScalarFunction expr_function(const std::string& text, const FractalOrder& order) {
    expr::Expr e = expr::parse(text);
    const auto vars = expr::variables(e);
    if (vars.size() > 1) throw UnsupportedForm("eval_ast", "expressions in more than one variable");
    const std::string name = vars.empty() ? "x" : vars.front();
    return [e, name, order](double x) { return expr::evaluate(e, {{name, x}}, order); };
}

ScalarFunction function_1d(const Context& ctx, const FractalOrder& order) {
    const int sources = int{ctx.given("--expr")} + int{ctx.given("--const")} + int{ctx.given("--staircase")};
    if (sources != 1) throw UsageError("exactly one of --expr, --const, --staircase is required");
    if (ctx.given("--expr")) return expr_function(ctx.o.expr, order);
    if (ctx.given("--const")) {
        const double v = ctx.o.constant;
        return [v](double) { return v; };
    }
    const unsigned stage = ctx.o.staircase;
    return [stage](double x) { return cantor_staircase(x, stage); };
}

bool two_dimensional(const Context& ctx) { return ctx.given("--expr-y") || ctx.given("--point"); }

ScalarFunction2 function_2d(const Context& ctx, const FractalOrder& order) {
    const ScalarFunction fx = function_1d(ctx, order);
    const ScalarFunction fy = ctx.given("--expr-y") ? expr_function(ctx.o.expr_y, order) : ScalarFunction{};
    if (ctx.o.combine == "product") {
        if (!fy) throw UsageError("--combine product needs --expr-y");
        return [fx, fy](double x, double y) { return fx(x) * fy(y); };
    }
    if (!fy) return [fx](double x, double) { return fx(x); };
    return [fx, fy](double x, double y) { return fx(x) + fy(y); };
}

std::pair<double, double> point_of(const Context& ctx) {
    if (!ctx.given("--point")) return {0.0, 0.0};
    return {ctx.o.point[0], ctx.o.point[1]};
}

Json meta(const FractalOrder& order) { return Json{{"alpha", order.value()}}; }

void merge(Json& dst, const Json& src) {
    for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

Report tabular(Json head, Table t) {
    Report r;
    r.json = std::move(head);
    merge(r.json, table_json(t));
    r.table = std::move(t);
    return r;
}

// ------------------------------------------------------------------- commands

Report run_eval(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    std::vector<double> xs;
    if (ctx.given("--x")) {
        xs = parse_list(ctx.o.x_list, "--x");
    } else if (ctx.given("--steps")) {
        if (ctx.o.steps < 1) throw UsageError("--steps must be at least 1");
        xs = linspace(ctx.o.a, ctx.o.b, ctx.o.steps);
    } else {
        throw UsageError("give evaluation points with --x or --a/--b/--steps");
    }

    std::function<double(double)> f;
    std::string label;
    if (ctx.given("--special")) {
        if (ctx.given("--expr")) throw UsageError("--special and --expr are exclusive");
        const std::string& s = ctx.o.special;
        label = s;
        if (s == "gamma") {
            f = [](double x) { return flc::gamma(x); };
        } else if (s == "ml") {
            f = [order](double w) { return ml(order, w).value; };
        } else if (s == "pow") {
            const double p = ctx.o.power;
            f = [p](double x) { return fractal_pow(x, p); };
        } else {
            throw UsageError("--special must be gamma, ml or pow");
        }
    } else {
        if (!ctx.given("--expr")) throw UsageError("--expr or --special is required");
        expr::Expr e = expr::parse(ctx.o.expr);
        label = expr::to_string(e);
        f = expr_function(ctx.o.expr, order);
    }

    Table t{{"x", "value"}, {}};
    for (double x : xs) t.rows.push_back({x, f(x)});
    Json head = meta(order);
    head["function"] = label;
    return tabular(std::move(head), std::move(t));
}

Report run_diff(const Context& ctx) {
    if (!ctx.given("--expr")) throw UsageError("--expr is required");
    if (ctx.o.times < 0) throw UsageError("--times must be nonnegative");
    const expr::Expr e = expr::parse(ctx.o.expr);
    expr::Expr d = e;
    for (int i = 0; i < ctx.o.times; ++i) d = expr::diff(d);
    Report r;
    r.text = expr::to_string(d);
    r.table = Table{{"expr", "derivative"}, {{expr::to_string(e), *r.text}}};
    r.json = Json{{"expr", expr::to_string(e)}, {"times", ctx.o.times}, {"derivative", *r.text}};
    return r;
}

PartitionScheme partition_of(const Context& ctx) {
    if (ctx.given("--uniform")) return PartitionScheme::uniform(ctx.o.uniform);
    if (ctx.given("--cantor")) return PartitionScheme::cantor(ctx.o.cantor, ctx.o.ratio);
    if (ctx.o.alpha_cantor || ctx.given("--stage")) return PartitionScheme::cantor(ctx.o.stage, ctx.o.ratio);
    return PartitionScheme::uniform(1000);
}

Report run_integrate(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    const ScalarFunction f = function_1d(ctx, order);
    const PartitionScheme part = partition_of(ctx);
    const auto res = lf_integral(f, ctx.o.a, ctx.o.b, order, part, ctx.o.threads);
    const std::string kind = part.kind() == PartitionScheme::Kind::uniform ? "uniform" : "cantor";
    Table t{{"a", "b", "partition", "cells", "value", "divergence_warning"}, {}};
    t.rows.push_back({ctx.o.a, ctx.o.b, kind, static_cast<std::int64_t>(res.cells), res.value,
                      res.divergence_warning});
    return tabular(meta(order), std::move(t));
}

std::optional<StepSchedule> schedule_of(const Context& ctx, bool second_order) {
    const bool any = ctx.given("--h0") || ctx.given("--step-ratio") || ctx.given("--step-count") ||
                     ctx.given("--tol");
    if (!any) return std::nullopt;
    StepSchedule s = second_order ? StepSchedule::second_order() : StepSchedule{};
    if (ctx.given("--h0")) s.h0 = ctx.o.h0;
    if (ctx.given("--step-ratio")) s.ratio = ctx.o.step_ratio;
    if (ctx.given("--step-count")) s.count = ctx.o.step_count;
    if (ctx.given("--tol")) s.tolerance = ctx.o.tol;
    return s;
}

std::vector<Axis> axes_of(const std::string& text) {
    std::vector<Axis> axes;
    for (char c : text) {
        if (c == 'x') {
            axes.push_back(Axis::x);
        } else if (c == 'y') {
            axes.push_back(Axis::y);
        } else {
            throw UsageError("--axes takes letters x and y, got '" + text + "'");
        }
    }
    return axes;
}

Report run_derivative(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    DerivativeEstimate est;
    Json head = meta(order);
    Table t;
    if (ctx.given("--axes")) {
        const auto axes = axes_of(ctx.o.axes);
        const auto p = point_of(ctx);
        const bool second = axes.size() == 2 && axes[0] == axes[1];
        est = lf_partial_fd(function_2d(ctx, order), p, order, axes, schedule_of(ctx, second));
        head["point"] = {p.first, p.second};
        head["axes"] = ctx.o.axes;
        t.header = {"x", "y", "axes", "value", "converged", "steps"};
        t.rows.push_back({p.first, p.second, ctx.o.axes, est.value, est.converged,
                          static_cast<std::int64_t>(est.steps.size())});
    } else {
        const ScalarFunction f = function_1d(ctx, order);
        est = ctx.o.times == 1 ? lf_derivative_fd(f, ctx.o.x0, order, schedule_of(ctx, false).value_or(StepSchedule{}))
                               : lf_derivative_iterated(f, ctx.o.x0, order, ctx.o.times,
                                                        schedule_of(ctx, ctx.o.times == 2));
        head["x0"] = ctx.o.x0;
        head["times"] = ctx.o.times;
        t.header = {"x0", "times", "value", "converged", "steps"};
        t.rows.push_back({ctx.o.x0, static_cast<std::int64_t>(ctx.o.times), est.value, est.converged,
                          static_cast<std::int64_t>(est.steps.size())});
    }
    if (ctx.o.trace) {
        t.header = {"h", "per_step_value"};
        t.rows.clear();
        for (std::size_t i = 0; i < est.per_step_values.size(); ++i) {
            t.rows.push_back({est.steps[i], est.per_step_values[i]});
        }
    }
    Report r;
    r.table = std::move(t);
    head["value"] = est.value;
    head["converged"] = est.converged;
    head["steps"] = est.steps;
    head["per_step_values"] = est.per_step_values;
    r.json = std::move(head);
    return r;
}

// Symbolic derivatives D^k e evaluated at x0, k = 0..n.
std::vector<double> rule_derivatives(const expr::Expr& e, double x0, int n, const FractalOrder& order) {
    const auto vars = expr::variables(e);
    const std::string name = vars.empty() ? "x" : vars.front();
    std::vector<double> out;
    expr::Expr d = e;
    for (int k = 0; k <= n; ++k) {
        out.push_back(expr::evaluate(d, {{name, x0}}, order));
        if (k < n) d = expr::diff(d);
    }
    return out;
}

FractalSeries apply_series_op(const FractalSeries& s, const std::string& op) {
    if (op == "derivative") return series_derivative(s);
    if (op == "antiderivative") return series_antiderivative(s);
    return s;
}

Report run_taylor_2d(const Context& ctx, const FractalOrder& order) {
    if (!ctx.given("--expr-y")) throw UsageError("two-variable expansions need --expr-y");
    const auto p = point_of(ctx);
    const expr::Expr ex = expr::parse(ctx.o.expr);
    const expr::Expr ey = expr::parse(ctx.o.expr_y);
    const int n = ctx.o.degree;
    const auto dx = rule_derivatives(ex, p.first, n, order);
    const auto dy = rule_derivatives(ey, p.second, n, order);
    const bool product = ctx.o.combine == "product";
    const MixedDerivativeOracle oracle = [&](int i, int j) {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        if (product) return dx[ui] * dy[uj];
        if (i == 0 && j == 0) return dx[0] + dy[0];
        if (j == 0) return dx[ui];
        if (i == 0) return dy[uj];
        return 0.0;
    };
    const auto s = taylor2d(oracle, p, order, n,
                            ctx.o.strict ? Taylor2dNormalization::unnormalized : Taylor2dNormalization::gamma);
    if (!ctx.given("--eval-at")) return series2d_report(s);
    if (ctx.o.eval_at.size() != 2) throw UsageError("--eval-at takes x and y for two-variable expansions");
    const double x = ctx.o.eval_at[0];
    const double y = ctx.o.eval_at[1];
    const ScalarFunction2 f = function_2d(ctx, order);
    const double sv = series2d_eval(s, x, y);
    const double fv = f(x, y);
    Table t{{"x", "y", "series_value", "function_value", "remainder"}, {{x, y, sv, fv, fv - sv}}};
    return tabular(meta(order), std::move(t));
}

Report run_taylor(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    if (!ctx.given("--expr")) throw UsageError("--expr is required");
    if (ctx.o.degree < 0) throw UsageError("--degree must be nonnegative");
    if (two_dimensional(ctx)) return run_taylor_2d(ctx, order);

    expr::Expr e = expr::parse(ctx.o.expr);
    const ScalarFunction f = expr_function(ctx.o.expr, order);
    const double x0 = ctx.o.x0;

    if (ctx.given("--mvt")) {
        const ScalarFunction falpha = expr_function(expr::to_string(expr::diff(e)), order);
        const auto w = mvt_locate(f, falpha, x0, ctx.o.mvt, order);
        Table t{{"x0", "x", "xi", "residual"}, {{x0, ctx.o.mvt, w.xi, w.residual}}};
        return tabular(meta(order), std::move(t));
    }

    FractalSeries s = x0 == 0.0 ? expr::to_series(e, order, ctx.o.degree)
                                : taylor_from_derivatives(rule_derivatives(e, x0, ctx.o.degree, order), order, x0);
    s = apply_series_op(s, ctx.o.series_op);
    if (!ctx.given("--eval-at")) return series_report(s);
    if (ctx.o.eval_at.size() != 1) throw UsageError("--eval-at takes one point for one-variable expansions");
    const double x = ctx.o.eval_at[0];
    const double sv = series_eval(s, x);
    Table t{{"x", "series_value", "function_value", "remainder"}, {}};
    if (ctx.o.series_op == "none") {
        t.rows.push_back({x, sv, f(x), taylor_remainder(f, s, x)});
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        t.rows.push_back({x, sv, nan, nan});
    }
    return tabular(meta(order), std::move(t));
}

Report run_hoelder(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    if (ctx.o.continuity) {
        const auto deltas = parse_list(ctx.o.deltas, "--deltas");
        const Interval dom{ctx.given("--a") ? ctx.o.a : 0.0,
                           ctx.given("--b") ? ctx.o.b : std::numeric_limits<double>::infinity()};
        if (two_dimensional(ctx)) {
            return continuity_report(
                lf_continuity_check_2d(function_2d(ctx, order), point_of(ctx), order, deltas, ctx.o.bound, dom, dom));
        }
        return continuity_report(lf_continuity_check(function_1d(ctx, order), ctx.o.x0, order, deltas, ctx.o.bound, dom));
    }
    HoelderOptions opts;
    opts.seed = ctx.o.seed;
    opts.separations = ctx.o.separations;
    opts.threads = ctx.o.threads;
    const ScalarFunction f = function_1d(ctx, order);
    if (ctx.given("--exponent")) {
        const double c = hoelder_constant(f, ctx.o.a, ctx.o.b, ctx.o.exponent, ctx.o.nsamples, opts);
        Table t{{"exponent", "constant"}, {{ctx.o.exponent, c}}};
        return tabular(meta(order), std::move(t));
    }
    return hoelder_report(hoelder_fit(f, ctx.o.a, ctx.o.b, ctx.o.nsamples, opts));
}

std::vector<double> time_grid(const Context& ctx) {
    if (ctx.given("--t-grid")) return parse_list(ctx.o.t_grid, "--t-grid");
    if (ctx.o.steps < 1) throw UsageError("--steps must be at least 1");
    if (!(ctx.o.t_max > 0.0)) throw UsageError("--t-max must be positive");
    return linspace(0.0, ctx.o.t_max, ctx.o.steps);
}

Report run_relax(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    const RelaxationProblem prob{order, ctx.o.c, ctx.o.y0};
    const std::string& m = ctx.o.method;
    Json head = meta(order);
    head["c"] = prob.c;
    head["y0"] = prob.y0;
    if (m == "exact") {
        const auto t = time_grid(ctx);
        const auto y = relax_exact(prob, t);
        Table table{{"t", "y"}, {}};
        for (std::size_t i = 0; i < t.size(); ++i) table.rows.push_back({t[i], y[i]});
        return tabular(std::move(head), std::move(table));
    }
    if (m == "series") {
        const auto s = relax_series(prob, ctx.o.t0, ctx.o.degree);
        if (!ctx.o.residual) return series_report(s);
        const auto res = relax_residual(s, prob.c, order);
        Table table{{"k", "residual"}, {}};
        for (std::size_t k = 0; k < res.size(); ++k) table.rows.push_back({static_cast<std::int64_t>(k), res[k]});
        return tabular(std::move(head), std::move(table));
    }
    if (m == "step") {
        if (!(ctx.o.t_max > 0.0)) throw UsageError("--t-max must be positive");
        if (!ctx.given("--dt") && ctx.o.steps < 1) throw UsageError("--steps must be at least 1");
        const double dt = ctx.given("--dt") ? ctx.o.dt : ctx.o.t_max / ctx.o.steps;
        const auto st = relax_step(prob, dt, ctx.o.t_max);
        head["multiplier"] = st.multiplier;
        head["stable"] = st.stable;
        head["monotone"] = st.monotone;
        Table table{{"t", "y"}, {}};
        for (std::size_t i = 0; i < st.t.size(); ++i) table.rows.push_back({st.t[i], st.y[i]});
        return tabular(std::move(head), std::move(table));
    }
    throw UsageError("--method must be exact, series or step");
}

ScalarFunction profile_of(const std::string& spec, double width, const FractalOrder& order) {
    if (spec.empty()) return {};
    if (spec == "gaussian") return [width](double x) { return std::exp(-x * x / (2.0 * width * width)); };
    if (spec == "bump") {
        return [width](double x) {
            const double u = x / width;
            return std::fabs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        };
    }
    return expr_function(spec, order);
}

Report run_pde(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    const Options& o = ctx.o;
    ModelSpec model{order, HeatModel{}};
    double lo = o.x_min;
    double hi = o.x_max;
    if (o.model == "heat") {
        model.model = HeatModel{o.kappa, o.conductivity, o.transfer, o.ambient, o.initial, o.length};
        lo = 0.0;
        hi = o.length;
    } else if (o.model == "wave") {
        if (o.rate.empty()) throw UsageError("the wave model needs --rate");
        model.model = WaveModel{profile_of(o.rate, o.width, order), profile_of(o.profile, o.width, order)};
    } else if (o.model == "diffusion") {
        if (o.profile.empty()) throw UsageError("the diffusion model needs --profile");
        model.model = DiffusionModel{o.a2alpha, profile_of(o.profile, o.width, order)};
    } else {
        throw UsageError("--model must be heat, wave or diffusion");
    }
    if (o.nx < 3) throw UsageError("--nx must be at least 3");
    if (o.stride < 1) throw UsageError("--stride must be at least 1");
    std::vector<double> x(o.nx);
    for (std::size_t i = 0; i < o.nx; ++i) {
        x[i] = i + 1 == o.nx ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.nx - 1);
    }
    const auto t = time_grid(ctx);
    PdeOptions opts;
    opts.enforce_stability = !o.override_stability;
    opts.threads = o.threads;
    Report r = grid_report(pde_solve(model, x, t, opts), o.stride);
    Json head = meta(order);
    head["model"] = o.model;
    if (t.size() > 1) head["stability_ratio"] = stability_ratio(model, x[1] - x[0], t[1] - t[0]);
    merge(head, r.json);
    r.json = std::move(head);
    return r;
}

Report run_defect(const Context& ctx) {
    const FractalOrder order = order_of(ctx);
    Json head = meta(order);
    if (ctx.o.relax) {
        const RelaxationProblem prob{order, ctx.o.c, ctx.o.y0};
        const auto ts = parse_list(ctx.o.t_list.empty() ? std::to_string(ctx.o.t0 + 0.1) : ctx.o.t_list, "--t");
        const auto s = relax_series(prob, ctx.o.t0, ctx.o.degree);
        const auto exact = relax_exact(prob, ts);
        Table t{{"t0", "t", "series", "exact", "defect"}, {}};
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double sv = series_eval(s, ts[i]);
            t.rows.push_back({ctx.o.t0, ts[i], sv, exact[i], std::fabs(sv - exact[i])});
        }
        return tabular(std::move(head), std::move(t));
    }
    const auto xs = parse_list(ctx.given("--x") ? ctx.o.x_list : "1", "--x");
    const auto ys = parse_list(ctx.given("--y") ? ctx.o.y_list : "1", "--y");
    Table t{{"x", "y", "defect"}, {}};
    for (double x : xs) {
        for (double y : ys) t.rows.push_back({x, y, ml_semigroup_defect(order, x, y)});
    }
    return tabular(std::move(head), std::move(t));
}

// --------------------------------------------------------------------- wiring

void add_common(CLI::App* app, Options& o, bool needs_order = true) {
    if (needs_order) {
        auto* a = app->add_option("--alpha", o.alpha, "Fractal order in (0, 1]");
        auto* c = app->add_flag("--alpha-cantor", o.alpha_cantor, "Order ln2/ln3 with Cantor partitions");
        a->excludes(c);
    }
    app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
    app->add_option("--out", o.out_path, "Write output to a file instead of standard output");
}

void add_function(CLI::App* app, Options& o) {
    app->add_option("--expr", o.expr, "Expression in x, e.g. \"E(x^a) + 2*x^(3*a)\"");
    app->add_option("--const", o.constant, "Constant function");
    app->add_option("--staircase", o.staircase, "Cantor staircase built to this stage");
}

void add_function_2d(CLI::App* app, Options& o) {
    app->add_option("--expr-y", o.expr_y, "Expression in the second variable");
    app->add_option("--combine", o.combine, "How the two parts combine")->check(CLI::IsMember({"sum", "product"}));
    app->add_option("--point", o.point, "Point (x, y)")->expected(2);
}

using Handler = Report (*)(const Context&);

struct Command {
    CLI::App* app;
    Handler run;
    Format fallback;
};

std::vector<Command> build(CLI::App& root, Options& o) {
    std::vector<Command> cmds;

    auto* eval = root.add_subcommand("eval", "Evaluate an expression or special function");
    add_common(eval, o);
    eval->add_option("--expr", o.expr, "Expression in x");
    eval->add_option("--special", o.special, "Special function")->check(CLI::IsMember({"gamma", "ml", "pow"}));
    eval->add_option("--p", o.power, "Exponent for --special pow");
    eval->add_option("--x", o.x_list, "Comma-separated evaluation points");
    eval->add_option("--a", o.a, "Grid start");
    eval->add_option("--b", o.b, "Grid end");
    eval->add_option("--steps", o.steps, "Grid intervals");
    cmds.push_back({eval, run_eval, Format::csv});

    auto* diff = root.add_subcommand("diff", "Apply the local fractional derivative rules to an expression");
    add_common(diff, o, false);
    diff->add_option("--expr", o.expr, "Expression in x");
    diff->add_option("--times", o.times, "Number of derivatives");
    cmds.push_back({diff, run_diff, Format::text});

    auto* integrate = root.add_subcommand("integrate", "Local fractional integral over [a, b]");
    add_common(integrate, o);
    add_function(integrate, o);
    integrate->add_option("--a", o.a, "Lower bound");
    integrate->add_option("--b", o.b, "Upper bound");
    auto* uni = integrate->add_option("--uniform", o.uniform, "Uniform partition with N cells");
    auto* can = integrate->add_option("--cantor", o.cantor, "Cantor partition at this stage");
    uni->excludes(can);
    integrate->add_option("--stage", o.stage, "Cantor stage used with --alpha-cantor");
    integrate->add_option("--ratio", o.ratio, "Cantor contraction ratio");
    integrate->add_option("--threads", o.threads, "Worker threads");
    cmds.push_back({integrate, run_integrate, Format::csv});

    auto* derivative = root.add_subcommand("derivative", "Finite-difference local fractional derivative");
    add_common(derivative, o);
    add_function(derivative, o);
    add_function_2d(derivative, o);
    derivative->add_option("--x0", o.x0, "Evaluation point");
    derivative->add_option("--times", o.times, "1 or 2");
    derivative->add_option("--axes", o.axes, "Partial derivative axes, outermost first, e.g. xy");
    derivative->add_option("--h0", o.h0, "Initial step");
    derivative->add_option("--step-ratio", o.step_ratio, "Step reduction ratio");
    derivative->add_option("--step-count", o.step_count, "Number of steps");
    derivative->add_option("--tol", o.tol, "Convergence tolerance");
    derivative->add_flag("--trace", o.trace, "Emit the per-step table");
    cmds.push_back({derivative, run_derivative, Format::csv});

    auto* taylor = root.add_subcommand("taylor", "Generalized Taylor series of an expression");
    add_common(taylor, o);
    taylor->add_option("--expr", o.expr, "Expression in x");
    add_function_2d(taylor, o);
    taylor->add_option("--x0", o.x0, "Expansion point");
    taylor->add_option("--degree", o.degree, "Highest power index");
    taylor->add_option("--op", o.series_op, "Series operation")
        ->check(CLI::IsMember({"none", "derivative", "antiderivative"}));
    taylor->add_option("--eval-at", o.eval_at, "Evaluate the series (and remainder) here")->expected(1, 2);
    taylor->add_option("--mvt", o.mvt, "Locate the mean value point on [x0, X]");
    taylor->add_flag("--strict-normalization", o.strict, "Two-variable coefficients without gamma factors");
    cmds.push_back({taylor, run_taylor, Format::csv});

    auto* hoelder = root.add_subcommand("hoelder", "Hoelder exponent fit and continuity checks");
    add_common(hoelder, o);
    add_function(hoelder, o);
    add_function_2d(hoelder, o);
    hoelder->add_option("--a", o.a, "Interval start");
    hoelder->add_option("--b", o.b, "Interval end");
    hoelder->add_option("--nsamples", o.nsamples, "Base points per separation");
    hoelder->add_option("--seed", o.seed, "Random pair seed");
    hoelder->add_option("--separations", o.separations, "Number of dyadic separations");
    hoelder->add_option("--exponent", o.exponent, "Report the constant at this exponent");
    hoelder->add_option("--threads", o.threads, "Worker threads");
    hoelder->add_flag("--continuity", o.continuity, "Run the sampled continuity check at --x0 or --point");
    hoelder->add_option("--x0", o.x0, "Continuity check point");
    hoelder->add_option("--bound", o.bound, "Continuity bound C");
    hoelder->add_option("--deltas", o.deltas, "Descending comma-separated neighborhood radii");
    cmds.push_back({hoelder, run_hoelder, Format::csv});

    auto* relax = root.add_subcommand("relax", "Relaxation equation y^(a) + c^a y = 0");
    add_common(relax, o);
    relax->add_option("--c", o.c, "Rate c > 0");
    relax->add_option("--y0", o.y0, "Initial value");
    relax->add_option("--t-max", o.t_max, "End time");
    relax->add_option("--steps", o.steps, "Time intervals");
    relax->add_option("--t-grid", o.t_grid, "Comma-separated time nodes");
    relax->add_option("--method", o.method, "exact, series or step");
    relax->add_option("--t0", o.t0, "Series center");
    relax->add_option("--degree", o.degree, "Series degree");
    relax->add_flag("--residual", o.residual, "Emit the series residual instead of coefficients");
    relax->add_option("--dt", o.dt, "Step size for --method step");
    cmds.push_back({relax, run_relax, Format::csv});

    auto* pde = root.add_subcommand("pde", "Explicit schemes for the heat, wave and diffusion models");
    add_common(pde, o);
    pde->add_option("--model", o.model, "heat, wave or diffusion")->required();
    pde->add_option("--x-min", o.x_min, "Left end (wave, diffusion)");
    pde->add_option("--x-max", o.x_max, "Right end (wave, diffusion)");
    pde->add_option("--nx", o.nx, "Spatial nodes");
    pde->add_option("--t-max", o.t_max, "End time");
    pde->add_option("--steps", o.steps, "Time steps");
    pde->add_option("--kappa", o.kappa, "Heat: diffusivity");
    pde->add_option("--conductivity", o.conductivity, "Heat: conductivity k");
    pde->add_option("--transfer", o.transfer, "Heat: transfer coefficient h");
    pde->add_option("--ambient", o.ambient, "Heat: ambient value");
    pde->add_option("--initial", o.initial, "Heat: initial value");
    pde->add_option("--length", o.length, "Heat: length L");
    pde->add_option("--a2alpha", o.a2alpha, "Diffusion coefficient");
    pde->add_option("--profile", o.profile, "Initial profile: gaussian, bump or an expression");
    pde->add_option("--rate", o.rate, "Wave: initial rate profile");
    pde->add_option("--width", o.width, "Width of the gaussian and bump profiles");
    pde->add_flag("--override-stability", o.override_stability, "Skip the stability ratio check");
    pde->add_option("--stride", o.stride, "Emit every n-th time row (the last is always kept)");
    pde->add_option("--threads", o.threads, "Worker threads");
    cmds.push_back({pde, run_pde, Format::csv});

    auto* defect = root.add_subcommand("defect", "Semigroup defect of the Mittag-Leffler function");
    add_common(defect, o);
    defect->add_option("--x", o.x_list, "Comma-separated x values");
    defect->add_option("--y", o.y_list, "Comma-separated y values");
    defect->add_flag("--relax", o.relax, "Compare the relaxation series about t0 with the exact solution");
    defect->add_option("--t0", o.t0, "Series center");
    defect->add_option("--t", o.t_list, "Comma-separated times");
    defect->add_option("--degree", o.degree, "Series degree");
    defect->add_option("--c", o.c, "Rate c > 0");
    defect->add_option("--y0", o.y0, "Initial value");
    cmds.push_back({defect, run_defect, Format::csv});

    return cmds;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto ctx = std::make_unique<Context>();
    CLI::App root("Local fractional calculus toolkit", "flc");
    root.require_subcommand(1);
    const auto cmds = build(root, ctx->o);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        root.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << root.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << root.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: UsageError: " << e.what() << "\n";
        return 2;
    }

    const Command* cmd = nullptr;
    for (const auto& c : cmds) {
        if (c.app->parsed()) cmd = &c;
    }
    ctx->sub = cmd->app;
    try {
        const Report report = cmd->run(*ctx);
        Format fmt = cmd->fallback;
        if (ctx->o.format == "csv") fmt = Format::csv;
        if (ctx->o.format == "json") fmt = Format::json;
        if (ctx->o.format == "text") {
            if (!report.text) throw UsageError("--format text is only available for diff");
            fmt = Format::text;
        }
        const std::string bytes = emit(report, fmt);
        if (ctx->o.out_path.empty()) {
            out << bytes;
            out.flush();
        } else {
            std::ofstream file(ctx->o.out_path, std::ios::binary | std::ios::trunc);
            file << bytes;
            file.close();
            if (!file) throw IoError("emit", "cannot write '" + ctx->o.out_path + "'");
        }
    } catch (const UsageError& e) {
        err << "error: UsageError: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.kind() << " in " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: InternalError: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

const std::vector<OperationRoute>& operation_routes() {
    static const std::vector<OperationRoute> routes = {
        {"gamma", {"eval", "--alpha", "1", "--special", "gamma", "--x", "0.5,1.5"}},
        {"ml", {"eval", "--alpha", "0.5", "--special", "ml", "--x", "-1,1"}},
        {"fractal_pow", {"eval", "--alpha", "0.5", "--special", "pow", "--p", "0.6309", "--x", "8"}},
        {"ml_semigroup_defect", {"defect", "--alpha", "0.5", "--x", "1", "--y", "1"}},
        {"lf_derivative_fd", {"derivative", "--alpha", "0.5", "--expr", "x^(1*a)", "--x0", "0"}},
        {"lf_derivative_iterated", {"derivative", "--alpha", "0.5", "--expr", "x^(2*a)", "--times", "2"}},
        {"lf_integral", {"integrate", "--const", "1", "--alpha-cantor", "--stage", "6"}},
        {"lf_partial_fd",
         {"derivative", "--alpha", "0.5", "--expr", "x^a", "--expr-y", "E(x^a)", "--axes", "xy", "--combine",
          "product", "--point", "0", "0"}},
        {"cantor_staircase", {"hoelder", "--alpha-cantor", "--staircase", "12"}},
        {"series_eval", {"taylor", "--alpha", "0.5", "--expr", "E(x^a)", "--degree", "30", "--eval-at", "1"}},
        {"series_derivative", {"taylor", "--alpha", "0.5", "--expr", "E(x^a)", "--op", "derivative"}},
        {"series_antiderivative", {"taylor", "--alpha", "0.5", "--expr", "E(x^a)", "--op", "antiderivative"}},
        {"taylor_from_derivatives", {"taylor", "--alpha", "0.5", "--expr", "E(x^a)", "--x0", "1"}},
        {"taylor_remainder", {"taylor", "--alpha", "1", "--expr", "E(x^a)", "--degree", "3", "--eval-at", "0.1"}},
        {"mvt_locate", {"taylor", "--alpha", "1", "--expr", "x^(2*a)", "--mvt", "1"}},
        {"taylor2d",
         {"taylor", "--alpha", "1", "--expr", "E(x^a)", "--expr-y", "E(x^a)", "--combine", "product", "--degree",
          "4", "--eval-at", "0.1", "0.1"}},
        {"hoelder_fit", {"hoelder", "--alpha", "0.5", "--expr", "x^a"}},
        {"lf_continuity_check",
         {"hoelder", "--alpha", "0.5", "--expr", "x^a", "--continuity", "--x0", "0", "--bound", "1.01"}},
        {"lf_continuity_check_2d",
         {"hoelder", "--alpha", "0.5", "--expr", "x^a", "--expr-y", "x^a", "--continuity", "--point", "0", "0",
          "--bound", "2.01"}},
        {"relax_exact", {"relax", "--alpha", "1", "--c", "1", "--y0", "2", "--t-max", "1", "--steps", "1"}},
        {"relax_series", {"relax", "--alpha", "0.5", "--method", "series", "--degree", "6"}},
        {"relax_residual", {"relax", "--alpha", "0.5", "--method", "series", "--degree", "6", "--residual"}},
        {"relax_step", {"relax", "--alpha", "0.5", "--method", "step", "--dt", "0.01", "--t-max", "1"}},
        {"pde_solve",
         {"pde", "--alpha", "1", "--model", "diffusion", "--profile", "gaussian", "--x-min", "-3", "--x-max", "3",
          "--nx", "61", "--t-max", "0.01", "--steps", "10"}},
        {"parse", {"diff", "--expr", "3*E(2*x^a) - x^(1*a)"}},
        {"diff_ast", {"diff", "--expr", "E(x^a)"}},
        {"eval_ast", {"eval", "--alpha", "0.5", "--expr", "E(2*x^a)", "--x", "1"}},
        {"to_series", {"taylor", "--alpha", "0.5", "--expr", "E(x^a)", "--degree", "3"}},
    };
    return routes;
}

}  // namespace flc::cli
