#include "flc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iterator>
#include <set>
#include <type_traits>

#include "flc/error.hpp"

namespace flc::expr {

// ---------------------------------------------------------------- Coefficient

namespace {

void normalize(std::vector<int>& num, std::vector<int>& den) {
    std::erase(num, 0);
    std::erase(den, 0);
    std::sort(num.begin(), num.end());
    std::sort(den.begin(), den.end());
    std::vector<int> n2;
    std::vector<int> d2;
    std::set_difference(num.begin(), num.end(), den.begin(), den.end(), std::back_inserter(n2));
    std::set_difference(den.begin(), den.end(), num.begin(), num.end(), std::back_inserter(d2));
    num = std::move(n2);
    den = std::move(d2);
}

}  // namespace

Coefficient::Coefficient(double v, std::vector<int> num, std::vector<int> den)
    : value(v), gamma_num(std::move(num)), gamma_den(std::move(den)) {
    normalize(gamma_num, gamma_den);
}

double Coefficient::evaluate(const FractalOrder& order) const {
    double v = value;
    const std::size_t n = std::max(gamma_num.size(), gamma_den.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int top = i < gamma_num.size() ? gamma_num[i] : 0;
        const int bottom = i < gamma_den.size() ? gamma_den[i] : 0;
        v *= gamma_ratio(order.value(), top, bottom);
    }
    return v;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    std::vector<int> num = a.gamma_num;
    num.insert(num.end(), b.gamma_num.begin(), b.gamma_num.end());
    std::vector<int> den = a.gamma_den;
    den.insert(den.end(), b.gamma_den.begin(), b.gamma_den.end());
    return Coefficient(a.value * b.value, std::move(num), std::move(den));
}

// ------------------------------------------------------------------- equality

bool operator==(const Expr& a, const Expr& b) {
    return a.node_ == b.node_ || a.node_->value == b.node_->value;
}
bool operator==(const Constant& a, const Constant& b) { return a.coef == b.coef; }
bool operator==(const Var& a, const Var& b) { return a.name == b.name; }
bool operator==(const Pow& a, const Pow& b) { return a.var == b.var && a.k == b.k; }
bool operator==(const Ml& a, const Ml& b) { return a.var == b.var && a.scale == b.scale; }
bool operator==(const Scale& a, const Scale& b) { return a.coef == b.coef && a.child == b.child; }
bool operator==(const Sum& a, const Sum& b) { return a.terms == b.terms; }
bool operator==(const Product& a, const Product& b) { return a.factors == b.factors; }

// --------------------------------------------------------------- constructors

namespace {

template <typename T>
Expr make(T v) {
    return Expr(std::make_shared<const Node>(Node{std::move(v)}));
}

template <typename T>
const T* as(const Expr& e) {
    return std::get_if<T>(&e.node().value);
}

bool is_zero_constant(const Expr& e) {
    const auto* c = as<Constant>(e);
    return c != nullptr && c->coef.value == 0.0;
}

}  // namespace

Expr constant(Coefficient c) {
    if (c.value == 0.0) c = Coefficient(0.0);
    return make(Constant{std::move(c)});
}

Expr variable(std::string name) { return make(Var{std::move(name)}); }

Expr power(std::string var, int k) { return make(Pow{std::move(var), k}); }

Expr mittag_leffler(std::string var, double scale) { return make(Ml{std::move(var), scale}); }

Expr scaled(Coefficient c, const Expr& e) {
    if (c.value == 0.0) return constant(Coefficient(0.0));
    if (const auto* k = as<Constant>(e)) return constant(c * k->coef);
    if (const auto* s = as<Scale>(e)) return scaled(c * s->coef, s->child);
    if (c.is_unit()) return e;
    return make(Scale{std::move(c), e});
}

Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (const auto* s = as<Sum>(t)) {
            for (const auto& inner : s->terms) flat.push_back(inner);
        } else if (!is_zero_constant(t)) {
            flat.push_back(std::move(t));
        }
    }
    if (flat.empty()) return constant(Coefficient(0.0));
    if (flat.size() == 1) return flat.front();
    return make(Sum{std::move(flat)});
}

Expr product(std::vector<Expr> factors) {
    Coefficient coef;
    std::vector<Expr> rest;
    // Worklist keeps factor order while unwrapping nested products and scales.
    std::vector<Expr> pending(factors.rbegin(), factors.rend());
    while (!pending.empty()) {
        Expr f = std::move(pending.back());
        pending.pop_back();
        if (const auto* c = as<Constant>(f)) {
            coef = coef * c->coef;
        } else if (const auto* s = as<Scale>(f)) {
            coef = coef * s->coef;
            pending.push_back(s->child);
        } else if (const auto* p = as<Product>(f)) {
            for (auto it = p->factors.rbegin(); it != p->factors.rend(); ++it) pending.push_back(*it);
        } else {
            rest.push_back(std::move(f));
        }
    }
    if (rest.empty()) return constant(coef);
    if (rest.size() == 1) return scaled(coef, rest.front());
    return scaled(coef, make(Product{std::move(rest)}));
}

// -------------------------------------------------------------------- printer

namespace {

std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string gamma_factor(int k) { return "G(1+" + std::to_string(k) + "*a)"; }

// |coef| in the grammar; empty when it is exactly 1.
std::string magnitude(const Coefficient& c) {
    const double v = std::fabs(c.value);
    std::string out;
    if (v != 1.0 || c.gamma_num.empty()) out = number(v);
    for (int k : c.gamma_num) out += (out.empty() ? "" : "*") + gamma_factor(k);
    for (int k : c.gamma_den) out += "/" + gamma_factor(k);
    if (out == "1") out.clear();
    return out;
}

std::string print_sum(const Expr& e);

std::string print_factor(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Pow>) {
                return n.var + "^(" + std::to_string(n.k) + "*a)";
            } else if constexpr (std::is_same_v<T, Ml>) {
                if (n.scale == 1.0) return "E(" + n.var + "^a)";
                return "E(" + number(n.scale) + "*" + n.var + "^a)";
            } else if constexpr (std::is_same_v<T, Product>) {
                std::string out;
                for (const auto& f : n.factors) out += (out.empty() ? "" : "*") + print_factor(f);
                return out;
            } else if constexpr (std::is_same_v<T, Sum>) {
                return "(" + print_sum(e) + ")";
            } else {
                // Constants and scales only appear as factors inside parentheses.
                return "(" + print_sum(e) + ")";
            }
        },
        e.node().value);
}

// Returns the unsigned text of a sum term and whether it carries a minus sign.
std::pair<std::string, bool> print_term(const Expr& e) {
    if (const auto* c = as<Constant>(e)) {
        std::string m = magnitude(c->coef);
        return {m.empty() ? "1" : m, c->coef.value < 0.0};
    }
    if (const auto* s = as<Scale>(e)) {
        const std::string m = magnitude(s->coef);
        const std::string body = print_factor(s->child);
        return {m.empty() ? body : m + "*" + body, s->coef.value < 0.0};
    }
    return {print_factor(e), false};
}

std::string print_sum(const Expr& e) {
    std::vector<Expr> terms;
    if (const auto* s = as<Sum>(e)) {
        terms = s->terms;
    } else {
        terms.push_back(e);
    }
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        auto [text, negative] = print_term(terms[i]);
        if (i == 0) {
            out += (negative ? "-" : "") + text;
        } else {
            out += (negative ? " - " : " + ") + text;
        }
    }
    return out;
}

}  // namespace

std::string to_string(const Expr& e) { return print_sum(e); }

// --------------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        skip_ws();
        if (pos_ == text_.size()) fail("an expression", "empty input");
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("'+', '-', '*', '/' or end of input", "unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(std::string expected, const std::string& detail) const {
        throw ParseError(pos_, std::move(expected), detail);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("'") + c + "'", pos_ == text_.size() ? "unexpected end of input" : "unexpected character");
        }
    }

    bool at_number() {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    double parse_number() {
        skip_ws();
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t count = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0) {
            pos_ = start;
            fail("number", "malformed number");
        }
        // Exponent only when a digit follows, so "2*E(...)" never lexes as 2e.
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || !std::isfinite(v)) {
            pos_ = start;
            fail("number", "number out of range");
        }
        return v;
    }

    int parse_multiplier() {
        skip_ws();
        const std::size_t start = pos_;
        const double v = parse_number();
        if (v != std::floor(v) || v > 100000.0) {
            pos_ = start;
            fail("nonnegative integer", "alpha multipliers must be nonnegative integers");
        }
        return static_cast<int>(v);
    }

    // [NUMBER '*'] 'a'
    int parse_alpha_multiple() {
        int k = 1;
        if (at_number()) {
            k = parse_multiplier();
            expect('*');
        }
        if (!accept('a')) fail("'a'", "expected the order symbol");
        return k;
    }

    int parse_gamma() {
        expect('(');
        skip_ws();
        const std::size_t start = pos_;
        if (!at_number() || parse_number() != 1.0) {
            pos_ = start;
            fail("'1'", "gamma factors are written G(1+k*a)");
        }
        expect('+');
        const int k = parse_alpha_multiple();
        expect(')');
        return k;
    }

    std::string parse_var() {
        const char c = peek();
        if (c == 'x' || c == 't') {
            ++pos_;
            return std::string(1, c);
        }
        fail("variable 'x' or 't'", "unexpected character");
    }

    Expr parse_expr() {
        std::vector<Expr> terms;
        if (accept('-')) {
            terms.push_back(scaled(Coefficient(-1.0), parse_term()));
        } else {
            terms.push_back(parse_term());
        }
        for (;;) {
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                terms.push_back(scaled(Coefficient(-1.0), parse_term()));
            } else {
                break;
            }
        }
        return sum(std::move(terms));
    }

    Expr parse_term() {
        std::vector<Expr> factors{parse_factor()};
        for (;;) {
            if (accept('*')) {
                factors.push_back(parse_factor());
            } else if (accept('/')) {
                if (at_number()) {
                    const std::size_t start = pos_;
                    const double v = parse_number();
                    if (v == 0.0) {
                        pos_ = start;
                        fail("nonzero number", "division by zero");
                    }
                    factors.push_back(constant(Coefficient(1.0 / v)));
                } else if (accept('G')) {
                    factors.push_back(constant(Coefficient(1.0, {}, {parse_gamma()})));
                } else {
                    fail("number or G(1+k*a)", "only constants may divide");
                }
            } else {
                break;
            }
        }
        return product(std::move(factors));
    }

    Expr parse_factor() {
        const char c = peek();
        if (at_number()) return constant(Coefficient(parse_number()));
        if (c == 'x' || c == 't') {
            std::string var = parse_var();
            if (!accept('^')) return variable(std::move(var));
            int k = 1;
            if (accept('(')) {
                k = parse_alpha_multiple();
                expect(')');
            } else if (!accept('a')) {
                fail("'a' or '('", "exponents are multiples of a");
            }
            return power(std::move(var), k);
        }
        if (accept('E')) {
            expect('(');
            double scale = 1.0;
            const bool negative = accept('-');
            if (negative || at_number()) {
                scale = parse_number();
                if (negative) scale = -scale;
                expect('*');
            }
            std::string var = parse_var();
            expect('^');
            if (!accept('a')) fail("'a'", "E takes var^a");
            expect(')');
            return mittag_leffler(std::move(var), scale);
        }
        if (accept('G')) return constant(Coefficient(1.0, {parse_gamma()}, {}));
        if (accept('(')) {
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        fail("number, variable, E(...), G(...) or '('",
             pos_ == text_.size() ? "unexpected end of input" : "unexpected character");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ------------------------------------------------------------------ variables

namespace {

void collect(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, Pow> || std::is_same_v<T, Ml>) {
                out.insert(n.var);
            } else if constexpr (std::is_same_v<T, Scale>) {
                collect(n.child, out);
            } else if constexpr (std::is_same_v<T, Sum>) {
                for (const auto& t : n.terms) collect(t, out);
            } else if constexpr (std::is_same_v<T, Product>) {
                for (const auto& f : n.factors) collect(f, out);
            }
        },
        e.node().value);
}

void require_single_variable(const Expr& e, const char* op) {
    if (variables(e).size() > 1) throw UnsupportedForm(op, "expressions in more than one variable");
}

}  // namespace

std::vector<std::string> variables(const Expr& e) {
    std::set<std::string> names;
    collect(e, names);
    return {names.begin(), names.end()};
}

// ------------------------------------------------------------------ rule diff

namespace {

Expr diff_node(const Expr& e) {
    constexpr const char* op = "diff_ast";
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return constant(Coefficient(0.0));
            } else if constexpr (std::is_same_v<T, Var>) {
                throw UnsupportedForm(op, "bare variable '" + n.name + "' is outside the x^(k*a) basis");
            } else if constexpr (std::is_same_v<T, Pow>) {
                if (n.k == 0) return constant(Coefficient(0.0));
                return scaled(Coefficient(1.0, {n.k}, {n.k - 1}), power(n.var, n.k - 1));
            } else if constexpr (std::is_same_v<T, Ml>) {
                return scaled(Coefficient(n.scale), e);
            } else if constexpr (std::is_same_v<T, Scale>) {
                return scaled(n.coef, diff_node(n.child));
            } else if constexpr (std::is_same_v<T, Sum>) {
                std::vector<Expr> terms;
                for (const auto& t : n.terms) terms.push_back(diff_node(t));
                return sum(std::move(terms));
            } else {
                throw UnsupportedForm(op, "no rule for products of non-constant factors");
            }
        },
        e.node().value);
}

}  // namespace

Expr diff(const Expr& e) {
    require_single_variable(e, "diff_ast");
    return diff_node(e);
}

// ----------------------------------------------------------------- evaluation

double evaluate(const Expr& e, const std::map<std::string, double>& bindings,
                const FractalOrder& order) {
    constexpr const char* op = "eval_ast";
    auto lookup = [&](const std::string& name) {
        const auto it = bindings.find(name);
        if (it == bindings.end()) throw UnboundVariable(op, "variable '" + name + "' is not bound");
        if (!(it->second >= 0.0)) {
            throw DomainError(op, "variable '" + name + "' must be nonnegative, got " + std::to_string(it->second));
        }
        return it->second;
    };
    const double alpha = order.value();
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return n.coef.evaluate(order);
            } else if constexpr (std::is_same_v<T, Var>) {
                return lookup(n.name);
            } else if constexpr (std::is_same_v<T, Pow>) {
                return fractal_pow(lookup(n.var), n.k * alpha);
            } else if constexpr (std::is_same_v<T, Ml>) {
                return ml(order, n.scale * fractal_pow(lookup(n.var), alpha)).value;
            } else if constexpr (std::is_same_v<T, Scale>) {
                return n.coef.evaluate(order) * evaluate(n.child, bindings, order);
            } else if constexpr (std::is_same_v<T, Sum>) {
                double s = 0.0;
                for (const auto& t : n.terms) s += evaluate(t, bindings, order);
                return s;
            } else {
                double p = 1.0;
                for (const auto& f : n.factors) p *= evaluate(f, bindings, order);
                return p;
            }
        },
        e.node().value);
}

// --------------------------------------------------------------------- series

namespace {

std::vector<double> coefficients(const Expr& e, const FractalOrder& order, std::size_t size) {
    constexpr const char* op = "to_series";
    return std::visit(
        [&](const auto& n) -> std::vector<double> {
            using T = std::decay_t<decltype(n)>;
            std::vector<double> c(size, 0.0);
            if constexpr (std::is_same_v<T, Constant>) {
                c[0] = n.coef.evaluate(order);
            } else if constexpr (std::is_same_v<T, Var>) {
                throw UnsupportedForm(op, "bare variable '" + n.name + "' is outside the x^(k*a) basis");
            } else if constexpr (std::is_same_v<T, Pow>) {
                if (static_cast<std::size_t>(n.k) < size) c[static_cast<std::size_t>(n.k)] = 1.0;
            } else if constexpr (std::is_same_v<T, Ml>) {
                for (std::size_t j = 0; j < size; ++j) {
                    const int jj = static_cast<int>(j);
                    c[j] = std::pow(n.scale, jj) * gamma_ratio(order.value(), 0, jj);
                }
            } else if constexpr (std::is_same_v<T, Scale>) {
                c = coefficients(n.child, order, size);
                const double k = n.coef.evaluate(order);
                for (double& v : c) v *= k;
            } else if constexpr (std::is_same_v<T, Sum>) {
                for (const auto& t : n.terms) {
                    const auto part = coefficients(t, order, size);
                    for (std::size_t j = 0; j < size; ++j) c[j] += part[j];
                }
            } else {
                throw UnsupportedForm(op, "products of non-constant factors have no series rule");
            }
            return c;
        },
        e.node().value);
}

}  // namespace

FractalSeries to_series(const Expr& e, const FractalOrder& order, int degree) {
    if (degree < 0) throw ConfigError("to_series", "degree must be nonnegative");
    require_single_variable(e, "to_series");
    return FractalSeries(order, 0.0, coefficients(e, order, static_cast<std::size_t>(degree) + 1));
}

}  // namespace flc::expr
