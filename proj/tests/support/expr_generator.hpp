#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flc/expr.hpp"

namespace flc::testing {

namespace ex = flc::expr;

// Random canonical expressions built through the public constructors.
class ExprGenerator {
public:
    explicit ExprGenerator(std::uint64_t seed, bool supported_only) : rng_(seed), supported_only_(supported_only) {}

    ex::Expr expr(int depth = 0) {
        const int pick = uniform(0, depth >= 2 ? 2 : 5);
        switch (pick) {
            case 0: return ex::power(var_, uniform(0, 6));
            case 1: return ex::mittag_leffler(var_, scale());
            case 2: return ex::constant(coefficient());
            case 3: return ex::scaled(coefficient(), expr(depth + 1));
            case 4: {
                std::vector<ex::Expr> terms;
                const int n = uniform(2, 4);
                for (int i = 0; i < n; ++i) terms.push_back(expr(depth + 1));
                return ex::sum(std::move(terms));
            }
            default: {
                if (supported_only_) return ex::scaled(coefficient(), expr(depth + 1));
                std::vector<ex::Expr> f{expr(depth + 1), uniform(0, 1) ? ex::variable(var_) : expr(depth + 1)};
                return ex::product(std::move(f));
            }
        }
    }

    void set_var(std::string v) { var_ = std::move(v); }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    double scale() {
        static const double choices[] = {1.0, -1.0, 0.5, -0.5, 0.25, 0.75, -0.3};
        return choices[uniform(0, 6)];
    }

    ex::Coefficient coefficient() {
        const double v = std::uniform_real_distribution<double>(-3.0, 3.0)(rng_);
        const double value = uniform(0, 2) == 0 ? std::round(v) + (v < 0 ? -1.0 : 1.0) : v;
        std::vector<int> num;
        std::vector<int> den;
        if (!supported_only_ || uniform(0, 3) == 0) {
            if (uniform(0, 2) == 0) num.push_back(uniform(1, 4));
            if (uniform(0, 2) == 0) den.push_back(uniform(1, 4));
        }
        return ex::Coefficient(value, num, den);
    }

    std::mt19937_64 rng_;
    bool supported_only_;
    std::string var_ = "x";
};

}  // namespace flc::testing
