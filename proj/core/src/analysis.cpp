#include "flc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>

#include "detail/numeric.hpp"
#include "flc/error.hpp"

namespace flc {

namespace {

struct Pair {
    double x;
    double sep;
    double diff;  // |f(x + sep) - f(x)|
};

double evaluate(const ScalarFunction& f, double x, const char* op) {
    double v = 0.0;
    try {
        v = f(x);
    } catch (const std::exception& e) {
        throw EvaluationError(op, "f(" + std::to_string(x) + ") failed: " + e.what());
    }
    if (!std::isfinite(v)) throw EvaluationError(op, "f(" + std::to_string(x) + ") is not finite");
    return v;
}

// Per separation, the sampled pairs in a fixed order.
std::vector<std::vector<Pair>> sample_pairs(const ScalarFunction& f, double a, double b,
                                            std::size_t nsamples, const HoelderOptions& opts,
                                            const char* op) {
    if (!(a < b)) throw ConfigError(op, "requires a < b");
    if (nsamples < 16) throw ConfigError(op, "nsamples must be at least 16");
    if (opts.separations < 2) throw ConfigError(op, "needs at least two separations");

    std::mt19937_64 rng(opts.seed);
    std::vector<std::vector<Pair>> by_sep(opts.separations);
    for (unsigned j = 0; j < opts.separations; ++j) {
        const double sep = (b - a) * std::ldexp(1.0, -static_cast<int>(j + 1));
        const double span = (b - a) - sep;
        auto& pairs = by_sep[j];
        for (std::size_t i = 0; i < nsamples; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(nsamples - 1);
            pairs.push_back(Pair{a + span * t, sep, 0.0});
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t i = 0; i < nsamples / 2; ++i) {
            pairs.push_back(Pair{a + span * u(rng), sep, 0.0});
        }
    }

    std::vector<Pair*> flat;
    for (auto& pairs : by_sep) {
        for (auto& p : pairs) flat.push_back(&p);
    }
    detail::parallel_for(flat.size(), opts.threads, [&](std::size_t k) {
        Pair& p = *flat[k];
        // x + sep may round past b.
        const double right = std::min(b, p.x + p.sep);
        p.diff = std::fabs(evaluate(f, right, op) - evaluate(f, p.x, op));
    });
    return by_sep;
}

}  // namespace

HoelderEstimate hoelder_fit(const ScalarFunction& f, double a, double b, std::size_t nsamples,
                            const HoelderOptions& opts) {
    constexpr const char* op = "hoelder_fit";
    const auto by_sep = sample_pairs(f, a, b, nsamples, opts, op);

    std::vector<double> lx;
    std::vector<double> ly;
    std::size_t usable = 0;
    for (const auto& pairs : by_sep) {
        double envelope = 0.0;
        for (const auto& p : pairs) {
            if (p.diff > 0.0) {
                ++usable;
                envelope = std::max(envelope, p.diff);
            }
        }
        if (envelope > 0.0) {
            lx.push_back(std::log(pairs.front().sep));
            ly.push_back(std::log(envelope));
        }
    }
    if (usable < 8 || lx.size() < 2) {
        throw DegenerateDataError(op, "only " + std::to_string(usable) + " pairs with f(x) != f(y) over " +
                                          std::to_string(lx.size()) + " separations");
    }

    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        ss += r * r;
    }

    HoelderEstimate est;
    est.exponent_hat = slope;
    est.fit_residual = std::sqrt(ss / n);
    est.pairs_used = usable;
    for (const auto& pairs : by_sep) {
        for (const auto& p : pairs) {
            if (p.diff > 0.0) est.constant_hat = std::max(est.constant_hat, p.diff / std::pow(p.sep, slope));
        }
    }
    return est;
}

double hoelder_constant(const ScalarFunction& f, double a, double b, double exponent,
                        std::size_t nsamples, const HoelderOptions& opts) {
    const auto by_sep = sample_pairs(f, a, b, nsamples, opts, "hoelder_constant");
    double c = 0.0;
    for (const auto& pairs : by_sep) {
        for (const auto& p : pairs) c = std::max(c, p.diff / std::pow(p.sep, exponent));
    }
    return c;
}

namespace {

void check_grid(const std::vector<double>& grid, double bound, const char* op) {
    if (grid.empty()) throw ConfigError(op, "delta grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw ConfigError(op, "delta values must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1])) throw ConfigError(op, "delta grid must be descending");
    }
    if (!(bound > 0.0)) throw ConfigError(op, "bound C must be positive");
}

}  // namespace

ContinuityReport lf_continuity_check(const ScalarFunction& f, double x0, const FractalOrder& order,
                                     const std::vector<double>& delta_grid, double bound,
                                     Interval domain) {
    constexpr const char* op = "lf_continuity_check";
    check_grid(delta_grid, bound, op);
    const double f0 = evaluate(f, x0, op);
    ContinuityReport rep;
    rep.worst_pair = {x0, x0};
    bool sampled = false;
    for (double delta : delta_grid) {
        for (int side : {-1, 1}) {
            for (int k = 1; k <= 8; ++k) {
                const double x = x0 + side * delta * k / 8.0;
                if (!domain.contains(x) || x == x0) continue;
                sampled = true;
                const double ratio =
                    std::fabs(evaluate(f, x, op) - f0) / std::pow(std::fabs(x - x0), order.value());
                if (ratio > rep.worst_ratio) {
                    rep.worst_ratio = ratio;
                    rep.worst_pair = {x0, x};
                }
            }
        }
    }
    if (!sampled) throw ConfigError(op, "no sample point falls inside the domain");
    rep.is_continuous = rep.worst_ratio <= bound;
    return rep;
}

ContinuityReport lf_continuity_check_2d(const ScalarFunction2& f, std::pair<double, double> p0,
                                        const FractalOrder& order,
                                        const std::vector<double>& delta_grid, double bound,
                                        Interval x_domain, Interval y_domain) {
    constexpr const char* op = "lf_continuity_check_2d";
    check_grid(delta_grid, bound, op);
    const auto [x0, y0] = p0;
    auto at = [&](double x, double y) { return evaluate([&](double yy) { return f(x, yy); }, y, op); };
    const double f0 = at(x0, y0);
    ContinuityReport rep;
    rep.worst_pair = p0;
    bool sampled = false;
    for (double delta : delta_grid) {
        for (int i = -4; i <= 4; ++i) {
            for (int j = -4; j <= 4; ++j) {
                if (i == 0 && j == 0) continue;
                const double x = x0 + delta * i / 4.0;
                const double y = y0 + delta * j / 4.0;
                if (!x_domain.contains(x) || !y_domain.contains(y)) continue;
                sampled = true;
                const double dist = std::max(std::fabs(x - x0), std::fabs(y - y0));
                const double ratio = std::fabs(at(x, y) - f0) / std::pow(dist, order.value());
                if (ratio > rep.worst_ratio) {
                    rep.worst_ratio = ratio;
                    rep.worst_pair = {x, y};
                }
            }
        }
    }
    if (!sampled) throw ConfigError(op, "no sample point falls inside the domain");
    rep.is_continuous = rep.worst_ratio <= bound;
    return rep;
}

}  // namespace flc
