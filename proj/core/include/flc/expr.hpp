#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flc/series.hpp"
#include "flc/special.hpp"

namespace flc::expr {

/// value * prod Gamma(1 + n*alpha) / prod Gamma(1 + d*alpha).
///
/// The Gamma factors stay symbolic until alpha is bound at evaluation time.
/// Lists are kept sorted with common entries cancelled and zero entries
/// (Gamma(1) = 1) dropped.
struct Coefficient {
    double value = 1.0;
    std::vector<int> gamma_num;
    std::vector<int> gamma_den;

    Coefficient() = default;
    Coefficient(double v, std::vector<int> num = {}, std::vector<int> den = {});

    [[nodiscard]] bool is_unit() const { return value == 1.0 && gamma_num.empty() && gamma_den.empty(); }
    [[nodiscard]] double evaluate(const FractalOrder& order) const;

    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

struct Node;

/// Immutable expression handle; copies share structure.
class Expr {
public:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    [[nodiscard]] const Node& node() const { return *node_; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const Node> node_;
};

struct Constant {
    Coefficient coef;
};
/// Bare variable, i.e. x^1 (not x^alpha).
struct Var {
    std::string name;
};
/// var^(k alpha).
struct Pow {
    std::string var;
    int k = 0;
};
/// E_alpha(scale * var^alpha).
struct Ml {
    std::string var;
    double scale = 1.0;
};
/// coef * child; child is never a Constant or Scale.
struct Scale {
    Coefficient coef;
    Expr child;
};
/// At least two terms, none of them a Sum.
struct Sum {
    std::vector<Expr> terms;
};
/// At least two non-constant factors, none of them a Product.
struct Product {
    std::vector<Expr> factors;
};

struct Node {
    std::variant<Constant, Var, Pow, Ml, Scale, Sum, Product> value;
};

bool operator==(const Constant&, const Constant&);
bool operator==(const Var&, const Var&);
bool operator==(const Pow&, const Pow&);
bool operator==(const Ml&, const Ml&);
bool operator==(const Scale&, const Scale&);
bool operator==(const Sum&, const Sum&);
bool operator==(const Product&, const Product&);

// Canonicalizing constructors. Every Expr reachable from the public API is
// built through these, which is what makes print/parse round-trip exactly.
Expr constant(Coefficient c);
Expr variable(std::string name);
Expr power(std::string var, int k);
Expr mittag_leffler(std::string var, double scale);
Expr scaled(Coefficient c, const Expr& e);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);

/// Grammar (whitespace-insensitive):
///   expr    := ['-'] term (('+' | '-') term)*
///   term    := factor (('*' factor) | ('/' divisor))*
///   factor  := NUMBER | VAR ['^' exp] | 'E' '(' [['-'] NUMBER '*'] VAR '^' 'a' ')'
///            | gamma | '(' expr ')'
///   divisor := NUMBER | gamma
///   gamma   := 'G' '(' '1' '+' [NUMBER '*'] 'a' ')'        -- Gamma(1 + k alpha)
///   exp     := 'a' | '(' [NUMBER '*'] 'a' ')'
///   VAR     := 'x' | 't'
/// 'a' stands for alpha; exponent and gamma multipliers are nonnegative integers.
/// Throws ParseError with the byte offset and the expected-token set.
Expr parse(std::string_view text);

/// Canonical text in the grammar accepted by parse.
std::string to_string(const Expr& e);

/// Applies the rule table d(x^(k a)) = Gamma(1+k a)/Gamma(1+(k-1) a) x^((k-1) a),
/// d E(s x^a) = s E(s x^a), constants to zero, linearity over sums and scaling.
/// Throws UnsupportedForm for products, bare variables, and mixed variables.
Expr diff(const Expr& e);

/// Throws UnboundVariable for a missing binding and DomainError for a negative one.
double evaluate(const Expr& e, const std::map<std::string, double>& bindings,
                const FractalOrder& order);

/// Exact coefficients about 0 up to `degree`: x^(k a) -> unit at k,
/// E(s x^a) -> s^j / Gamma(1 + j a). Throws UnsupportedForm outside that family.
FractalSeries to_series(const Expr& e, const FractalOrder& order, int degree = kDefaultSeriesDegree);

/// Variable names used, sorted.
std::vector<std::string> variables(const Expr& e);

}  // namespace flc::expr
