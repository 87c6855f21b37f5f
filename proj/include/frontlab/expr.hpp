#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/jet.hpp"

namespace frontlab {

using Params = std::map<std::string, double>;

/// Immutable expression tree over indexed variables and named parameters.
class Expression {
public:
    enum class Op { number, variable, parameter, neg, add, sub, mul, div, pow, call };
    enum class Func { sin, cos, tan, exp, log, sqrt };

    struct Node {
        Op op = Op::number;
        double number = 0.0;
        int index = -1;
        std::string name;
        Func func = Func::sin;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    using Ptr = std::shared_ptr<const Node>;

    Expression() : Expression(constant(0.0)) {}

    static Expression constant(double x) {
        auto n = std::make_shared<Node>();
        n->op = Op::number;
        n->number = x;
        return Expression(n);
    }

    static Expression variable(int index, std::string name) {
        auto n = std::make_shared<Node>();
        n->op = Op::variable;
        n->index = index;
        n->name = std::move(name);
        return Expression(n);
    }

    static Expression parameter(std::string name) {
        auto n = std::make_shared<Node>();
        n->op = Op::parameter;
        n->name = std::move(name);
        return Expression(n);
    }

    static Expression call(Func f, const Expression& arg) {
        if (arg.is_number()) {
            const double x = arg.number();
            switch (f) {
            case Func::sin: return constant(std::sin(x));
            case Func::cos: return constant(std::cos(x));
            case Func::exp: return constant(std::exp(x));
            default: break;
            }
        }
        auto n = std::make_shared<Node>();
        n->op = Op::call;
        n->func = f;
        n->lhs = arg.node_;
        return Expression(n);
    }

    static Expression power(const Expression& base, const Expression& exponent) {
        if (exponent.is_number(0.0)) return constant(1.0);
        if (exponent.is_number(1.0)) return base;
        if (base.is_number(0.0) && exponent.is_number() && exponent.number() > 0) return constant(0.0);
        return binary(Op::pow, base, exponent);
    }

    const Node& node() const { return *node_; }
    Op op() const { return node_->op; }
    bool is_number() const { return node_->op == Op::number; }
    bool is_number(double x) const { return is_number() && node_->number == x; }
    double number() const { return node_->number; }

    friend Expression operator-(const Expression& a) {
        if (a.is_number()) return constant(-a.number());
        if (a.op() == Op::neg) return Expression(a.node_->lhs);
        auto n = std::make_shared<Node>();
        n->op = Op::neg;
        n->lhs = a.node_;
        return Expression(n);
    }

    friend Expression operator+(const Expression& a, const Expression& b) {
        if (a.is_number(0.0)) return b;
        if (b.is_number(0.0)) return a;
        if (a.is_number() && b.is_number()) return constant(a.number() + b.number());
        return binary(Op::add, a, b);
    }

    friend Expression operator-(const Expression& a, const Expression& b) {
        if (b.is_number(0.0)) return a;
        if (a.is_number(0.0)) return -b;
        if (a.is_number() && b.is_number()) return constant(a.number() - b.number());
        return binary(Op::sub, a, b);
    }

    friend Expression operator*(const Expression& a, const Expression& b) {
        if (a.is_number(0.0) || b.is_number(0.0)) return constant(0.0);
        if (a.is_number(1.0)) return b;
        if (b.is_number(1.0)) return a;
        if (a.is_number(-1.0)) return -b;
        if (b.is_number(-1.0)) return -a;
        if (a.is_number() && b.is_number()) return constant(a.number() * b.number());
        return binary(Op::mul, a, b);
    }

    friend Expression operator/(const Expression& a, const Expression& b) {
        if (a.is_number(0.0)) return constant(0.0);
        if (b.is_number(1.0)) return a;
        return binary(Op::div, a, b);
    }

    /// Evaluate with T = double or T = Jet2. `vars[i]` is the value of
    /// variable i; constants are shaped like vars[0].
    template <class T>
    T evaluate(const std::vector<T>& vars, const Params& params) const {
        if (vars.empty()) throw std::invalid_argument("Expression::evaluate: no variables supplied");
        return eval<T>(*node_, vars, params);
    }

    /// Value of an expression free of variables (parameters allowed).
    double evaluate_constant(const Params& params) const {
        if (depends_on_variables()) throw DomainError("expression depends on variables");
        std::vector<double> none{0.0};
        return eval<double>(*node_, none, params);
    }

    Expression derivative(int var) const { return diff(node_, var); }

    /// Replace variable i by replacement[i].
    Expression substitute(const std::vector<Expression>& replacement) const {
        return subst(node_, replacement);
    }

    bool depends_on_variables() const { return depends(*node_); }

    void collect_parameters(std::set<std::string>& out) const { collect(*node_, out); }

    std::string str() const {
        std::ostringstream os;
        os.precision(17);
        print(os, *node_, 0);
        return os.str();
    }

private:
    explicit Expression(Ptr n) : node_(std::move(n)) {}

    static Expression binary(Op op, const Expression& a, const Expression& b) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = a.node_;
        n->rhs = b.node_;
        return Expression(n);
    }

    static long integer_exponent(double x) {
        const double r = std::round(x);
        if (std::abs(x - r) > 1e-12 * std::max(1.0, std::abs(x)) || std::abs(r) > 1e6)
            throw DomainError("exponent does not evaluate to an integer");
        return static_cast<long>(r);
    }

    template <class T>
    static T eval(const Node& n, const std::vector<T>& vars, const Params& params) {
        switch (n.op) {
        case Op::number: return lift_like(vars[0], n.number);
        case Op::variable:
            if (n.index < 0 || static_cast<std::size_t>(n.index) >= vars.size())
                throw std::invalid_argument("Expression::evaluate: variable index out of range");
            return vars[static_cast<std::size_t>(n.index)];
        case Op::parameter: {
            auto it = params.find(n.name);
            if (it == params.end()) throw DomainError("unbound parameter '" + n.name + "'");
            return lift_like(vars[0], it->second);
        }
        case Op::neg: return -eval<T>(*n.lhs, vars, params);
        case Op::add: return eval<T>(*n.lhs, vars, params) + eval<T>(*n.rhs, vars, params);
        case Op::sub: return eval<T>(*n.lhs, vars, params) - eval<T>(*n.rhs, vars, params);
        case Op::mul: return eval<T>(*n.lhs, vars, params) * eval<T>(*n.rhs, vars, params);
        case Op::div: {
            T den = eval<T>(*n.rhs, vars, params);
            if (value_of(den) == 0.0) throw DomainError("division by zero");
            return eval<T>(*n.lhs, vars, params) / den;
        }
        case Op::pow: {
            std::vector<double> none{0.0};
            const long k = integer_exponent(eval<double>(*n.rhs, none, params));
            T b = eval<T>(*n.lhs, vars, params);
            if (k < 0 && value_of(b) == 0.0) throw DomainError("negative power of zero");
            return pow_int(b, k);
        }
        case Op::call: {
            T a = eval<T>(*n.lhs, vars, params);
            using std::cos, std::exp, std::log, std::sin, std::sqrt, std::tan;
            switch (n.func) {
            case Func::sin: return sin(a);
            case Func::cos: return cos(a);
            case Func::tan:
                if (std::abs(std::cos(value_of(a))) < 1e-300) throw DomainError("tan at a pole");
                return tan(a);
            case Func::exp: return exp(a);
            case Func::log:
                if (!(value_of(a) > 0.0)) throw DomainError("log of a non-positive value");
                return log(a);
            case Func::sqrt:
                if (!(value_of(a) > 0.0)) {
                    if constexpr (std::is_same_v<T, double>) {
                        if (value_of(a) == 0.0) return 0.0;
                    }
                    throw DomainError("sqrt of a non-positive value");
                }
                return sqrt(a);
            }
        }
        }
        throw std::logic_error("Expression: unknown node");
    }

    static double value_of(double x) { return x; }
    static double value_of(const Jet2& j) { return j.value(); }

    static Expression diff(const Ptr& p, int var) {
        const Node& n = *p;
        Expression self(p);
        switch (n.op) {
        case Op::number:
        case Op::parameter: return constant(0.0);
        case Op::variable: return constant(n.index == var ? 1.0 : 0.0);
        case Op::neg: return -diff(n.lhs, var);
        case Op::add: return diff(n.lhs, var) + diff(n.rhs, var);
        case Op::sub: return diff(n.lhs, var) - diff(n.rhs, var);
        case Op::mul: {
            Expression a(n.lhs), b(n.rhs);
            return diff(n.lhs, var) * b + a * diff(n.rhs, var);
        }
        case Op::div: {
            Expression a(n.lhs), b(n.rhs);
            return diff(n.lhs, var) / b - a * diff(n.rhs, var) / power(b, constant(2.0));
        }
        case Op::pow: {
            Expression a(n.lhs), k(n.rhs);
            return k * power(a, k - constant(1.0)) * diff(n.lhs, var);
        }
        case Op::call: {
            Expression a(n.lhs);
            Expression da = diff(n.lhs, var);
            if (da.is_number(0.0)) return constant(0.0);
            switch (n.func) {
            case Func::sin: return call(Func::cos, a) * da;
            case Func::cos: return -(call(Func::sin, a) * da);
            case Func::tan: return da / power(call(Func::cos, a), constant(2.0));
            case Func::exp: return self * da;
            case Func::log: return da / a;
            case Func::sqrt: return da / (constant(2.0) * self);
            }
        }
        }
        throw std::logic_error("Expression: unknown node");
    }

    static Expression subst(const Ptr& p, const std::vector<Expression>& r) {
        const Node& n = *p;
        switch (n.op) {
        case Op::number:
        case Op::parameter: return Expression(p);
        case Op::variable:
            if (n.index >= 0 && static_cast<std::size_t>(n.index) < r.size())
                return r[static_cast<std::size_t>(n.index)];
            return Expression(p);
        case Op::neg: return -subst(n.lhs, r);
        case Op::add: return subst(n.lhs, r) + subst(n.rhs, r);
        case Op::sub: return subst(n.lhs, r) - subst(n.rhs, r);
        case Op::mul: return subst(n.lhs, r) * subst(n.rhs, r);
        case Op::div: return subst(n.lhs, r) / subst(n.rhs, r);
        case Op::pow: return power(subst(n.lhs, r), Expression(n.rhs));
        case Op::call: return call(n.func, subst(n.lhs, r));
        }
        throw std::logic_error("Expression: unknown node");
    }

    static bool depends(const Node& n) {
        if (n.op == Op::variable) return true;
        return (n.lhs && depends(*n.lhs)) || (n.rhs && depends(*n.rhs));
    }

    static void collect(const Node& n, std::set<std::string>& out) {
        if (n.op == Op::parameter) out.insert(n.name);
        if (n.lhs) collect(*n.lhs, out);
        if (n.rhs) collect(*n.rhs, out);
    }

    static const char* func_name(Func f) {
        switch (f) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::tan: return "tan";
        case Func::exp: return "exp";
        case Func::log: return "log";
        case Func::sqrt: return "sqrt";
        }
        return "?";
    }

    // precedence: 1 additive, 2 multiplicative, 3 unary, 4 power, 5 atom
    static void print(std::ostream& os, const Node& n, int outer) {
        auto wrap = [&](int prec, auto body) {
            if (prec < outer) os << '(';
            body();
            if (prec < outer) os << ')';
        };
        switch (n.op) {
        case Op::number:
            if (n.number < 0) wrap(3, [&] { os << n.number; });
            else os << n.number;
            return;
        case Op::variable:
        case Op::parameter: os << n.name; return;
        case Op::neg: wrap(3, [&] { os << '-'; print(os, *n.lhs, 3); }); return;
        case Op::add: wrap(1, [&] { print(os, *n.lhs, 1); os << " + "; print(os, *n.rhs, 2); }); return;
        case Op::sub: wrap(1, [&] { print(os, *n.lhs, 1); os << " - "; print(os, *n.rhs, 2); }); return;
        case Op::mul: wrap(2, [&] { print(os, *n.lhs, 2); os << '*'; print(os, *n.rhs, 3); }); return;
        case Op::div: wrap(2, [&] { print(os, *n.lhs, 2); os << '/'; print(os, *n.rhs, 3); }); return;
        case Op::pow: wrap(4, [&] { print(os, *n.lhs, 5); os << '^'; print(os, *n.rhs, 5); }); return;
        case Op::call: os << func_name(n.func) << '('; print(os, *n.lhs, 0); os << ')'; return;
        }
    }

    Ptr node_;
};

namespace detail {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, const std::vector<std::string>& vars,
                     const std::set<std::string>& params, int line, int column)
        : s_(text), vars_(vars), params_(params), line_(line), column_(column) {}

    Expression parse() {
        skip_ws();
        if (pos_ >= s_.size()) fail("empty expression", pos_);
        Expression e = parse_sum();
        skip_ws();
        if (pos_ < s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::size_t at) const {
        throw ParseError(what, line_, column_ + static_cast<int>(at));
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    Expression parse_sum() {
        Expression e = parse_product();
        for (;;) {
            if (accept('+')) e = e + parse_product();
            else if (accept('-')) e = e - parse_product();
            else return e;
        }
    }

    Expression parse_product() {
        Expression e = parse_unary();
        for (;;) {
            if (accept('*')) e = e * parse_unary();
            else if (accept('/')) e = e / parse_unary();
            else return e;
        }
    }

    Expression parse_unary() {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_atom();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            Expression exponent = parse_unary();
            if (exponent.depends_on_variables()) fail("exponent must not depend on variables", at);
            if (exponent.is_number()) {
                const double k = exponent.number();
                if (std::abs(k - std::round(k)) > 1e-12) fail("exponent must be an integer", at);
            }
            return Expression::power(base, exponent);
        }
        return base;
    }

    Expression parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expression e = parse_sum();
            if (!accept(')')) fail("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    Expression parse_number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                pos_ = q;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, x);
        if (ec != std::errc() || ptr != s_.data() + pos_) fail("malformed number", start);
        return Expression::constant(x);
    }

    Expression parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            static const std::map<std::string, Expression::Func> funcs = {
                {"sin", Expression::Func::sin}, {"cos", Expression::Func::cos},
                {"tan", Expression::Func::tan}, {"exp", Expression::Func::exp},
                {"log", Expression::Func::log}, {"sqrt", Expression::Func::sqrt}};
            static const std::set<std::string> rejected = {
                "abs", "sign", "sgn", "floor", "ceil", "round", "min", "max", "mod", "fabs", "trunc"};
            auto it = funcs.find(name);
            if (it == funcs.end()) {
                if (rejected.count(name)) fail("non-smooth function '" + name + "'", start);
                fail("unknown function '" + name + "'", start);
            }
            ++pos_;
            Expression arg = parse_sum();
            if (!accept(')')) fail("expected ')'", pos_);
            return Expression::call(it->second, arg);
        }
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return Expression::variable(static_cast<int>(i), name);
        if (params_.count(name)) return Expression::parameter(name);
        if (name == "pi") return Expression::constant(std::numbers::pi);
        if (name == "e") return Expression::constant(std::numbers::e);
        fail("unknown identifier '" + name + "'", start);
    }

    std::string_view s_;
    const std::vector<std::string>& vars_;
    const std::set<std::string>& params_;
    int line_;
    int column_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline const std::vector<std::string>& surface_variables() {
    static const std::vector<std::string> v = {"u", "v"};
    return v;
}

inline const std::vector<std::string>& ambient_variables() {
    static const std::vector<std::string> v = {"x1", "x2", "x3"};
    return v;
}

/// Parse `text`. Positions in errors are reported relative to (line, column)
/// of the first character of `text`.
inline Expression parse_expression(std::string_view text, const std::vector<std::string>& variables,
                                   const std::set<std::string>& parameters = {}, int line = 1,
                                   int column = 1) {
    return detail::ExpressionParser(text, variables, parameters, line, column).parse();
}

inline int default_max_jet_order() { return 6; }

/// Taylor jet of a surface expression in (u, v) at `base`.
inline Jet2 evaluate_jet(const Expression& e, Point2 base, int order, const Params& params = {},
                         int max_order = default_max_jet_order()) {
    if (order < 0) throw DomainError("negative jet order");
    if (order > max_order)
        throw DomainError("jet order " + std::to_string(order) + " exceeds configured maximum " +
                          std::to_string(max_order));
    std::vector<Jet2> vars{Jet2::variable(Axis::u, order, base), Jet2::variable(Axis::v, order, base)};
    return e.evaluate(vars, params);
}

} // namespace frontlab
