#pragma once

// Expression trees for holomorphic maps of one complex variable: parsing,
// evaluation, exact symbolic differentiation, composition and printing.
//
// Node set: constants, the variable z, +, -, *, /, integer powers, real
// powers and log on the principal branch (cut along (-inf, 0]), exp, and
// Moebius maps (a w + b)/(c w + d).
//
// Trees are immutable and shared; all operations here are pure.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "koenigs/types.hpp"

namespace koenigs {

enum class ExprKind {
    Constant,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    IntPow,
    RealPow,
    Exp,
    Log,
    Mobius,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    ExprKind kind;
    Complex value{};      // Constant
    long long ipow = 0;   // IntPow exponent
    double rpow = 0.0;    // RealPow exponent
    Complex ma{}, mb{}, mc{}, md{}; // Mobius coefficients (ma w + mb)/(mc w + md)
    ExprPtr a, b;         // children; unary nodes and Mobius use only `a`

    explicit Expr(ExprKind k) : kind(k) {}
};

inline ExprPtr expr_const(Complex c) {
    auto e = std::make_shared<Expr>(ExprKind::Constant);
    e->value = c;
    return e;
}

inline ExprPtr expr_var() {
    static const ExprPtr z = std::make_shared<Expr>(ExprKind::Var);
    return z;
}

namespace detail {

inline bool is_const(const ExprPtr& e) { return e->kind == ExprKind::Constant; }
inline bool is_const(const ExprPtr& e, Complex v) {
    return e->kind == ExprKind::Constant && e->value == v;
}

inline ExprPtr binary(ExprKind k, ExprPtr x, ExprPtr y) {
    auto e = std::make_shared<Expr>(k);
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
}

} // namespace detail

// Factories fold constant subtrees and algebraic identities so derivative
// trees stay small.  Folding is purely structural, hence deterministic.

inline ExprPtr expr_add(ExprPtr x, ExprPtr y) {
    using namespace detail;
    if (is_const(x) && is_const(y)) return expr_const(x->value + y->value);
    if (is_const(x, 0.0)) return y;
    if (is_const(y, 0.0)) return x;
    return binary(ExprKind::Add, std::move(x), std::move(y));
}

inline ExprPtr expr_sub(ExprPtr x, ExprPtr y) {
    using namespace detail;
    if (is_const(x) && is_const(y)) return expr_const(x->value - y->value);
    if (is_const(y, 0.0)) return x;
    return binary(ExprKind::Sub, std::move(x), std::move(y));
}

inline ExprPtr expr_mul(ExprPtr x, ExprPtr y) {
    using namespace detail;
    if (is_const(x) && is_const(y)) return expr_const(x->value * y->value);
    if (is_const(x, 0.0) || is_const(y, 0.0)) return expr_const(0.0);
    if (is_const(x, 1.0)) return y;
    if (is_const(y, 1.0)) return x;
    return binary(ExprKind::Mul, std::move(x), std::move(y));
}

inline ExprPtr expr_div(ExprPtr x, ExprPtr y) {
    using namespace detail;
    if (is_const(x) && is_const(y) && std::abs(y->value) > 0.0)
        return expr_const(x->value / y->value);
    if (is_const(x, 0.0)) return expr_const(0.0);
    if (is_const(y, 1.0)) return x;
    return binary(ExprKind::Div, std::move(x), std::move(y));
}

inline ExprPtr expr_ipow(ExprPtr x, long long n) {
    if (n == 0) return expr_const(1.0);
    if (n == 1) return x;
    if (detail::is_const(x) && (std::abs(x->value) > 0.0 || n > 0)) {
        Complex r = 1.0;
        Complex base = n > 0 ? x->value : 1.0 / x->value;
        for (long long k = std::llabs(n); k > 0; k >>= 1) {
            if (k & 1) r *= base;
            base *= base;
        }
        return expr_const(r);
    }
    auto e = std::make_shared<Expr>(ExprKind::IntPow);
    e->a = std::move(x);
    e->ipow = n;
    return e;
}

inline ExprPtr expr_rpow(ExprPtr x, double p) {
    if (p == 0.0) return expr_const(1.0);
    if (p == 1.0) return x;
    auto e = std::make_shared<Expr>(ExprKind::RealPow);
    e->a = std::move(x);
    e->rpow = p;
    return e;
}

inline ExprPtr expr_exp(ExprPtr x) {
    if (detail::is_const(x)) {
        const Complex v = std::exp(x->value);
        if (is_finite(v)) return expr_const(v);
    }
    auto e = std::make_shared<Expr>(ExprKind::Exp);
    e->a = std::move(x);
    return e;
}

inline ExprPtr expr_log(ExprPtr x) {
    if (detail::is_const(x)) {
        const Complex v = x->value;
        if (std::abs(v) > 0.0 && !(v.imag() == 0.0 && v.real() < 0.0))
            return expr_const(std::log(v));
    }
    auto e = std::make_shared<Expr>(ExprKind::Log);
    e->a = std::move(x);
    return e;
}

inline ExprPtr expr_mobius(Complex a, Complex b, Complex c, Complex d, ExprPtr inner) {
    if (a * d - b * c == Complex(0.0))
        throw domain_error("degenerate Moebius coefficients (ad - bc = 0)");
    auto e = std::make_shared<Expr>(ExprKind::Mobius);
    e->ma = a;
    e->mb = b;
    e->mc = c;
    e->md = d;
    e->a = std::move(inner);
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline constexpr double kPoleTol = 1e-300;

inline void check_log_argument(Complex v, Complex z) {
    if (std::abs(v) < kPoleTol)
        throw evaluation_error("log of zero at z = " + to_string(z));
    if (v.imag() == 0.0 && v.real() < 0.0)
        throw evaluation_error("evaluation on the branch cut (-inf, 0] at z = " + to_string(z));
}

inline Complex int_pow(Complex base, long long n, Complex z) {
    if (n < 0) {
        if (std::abs(base) < kPoleTol)
            throw evaluation_error("pole (negative power of zero) at z = " + to_string(z));
        base = 1.0 / base;
        n = -n;
    }
    Complex r = 1.0;
    for (long long k = n; k > 0; k >>= 1) {
        if (k & 1) r *= base;
        base *= base;
    }
    return r;
}

} // namespace detail

inline Complex eval_expr(const ExprPtr& e, Complex z) {
    switch (e->kind) {
    case ExprKind::Constant: return e->value;
    case ExprKind::Var: return z;
    case ExprKind::Add: return eval_expr(e->a, z) + eval_expr(e->b, z);
    case ExprKind::Sub: return eval_expr(e->a, z) - eval_expr(e->b, z);
    case ExprKind::Mul: return eval_expr(e->a, z) * eval_expr(e->b, z);
    case ExprKind::Div: {
        const Complex num = eval_expr(e->a, z);
        const Complex den = eval_expr(e->b, z);
        if (std::abs(den) < detail::kPoleTol)
            throw evaluation_error("division by zero at z = " + to_string(z));
        return num / den;
    }
    case ExprKind::IntPow:
        return detail::int_pow(eval_expr(e->a, z), e->ipow, z);
    case ExprKind::RealPow: {
        const Complex base = eval_expr(e->a, z);
        detail::check_log_argument(base, z);
        return std::exp(e->rpow * std::log(base));
    }
    case ExprKind::Exp: return std::exp(eval_expr(e->a, z));
    case ExprKind::Log: {
        const Complex v = eval_expr(e->a, z);
        detail::check_log_argument(v, z);
        return std::log(v);
    }
    case ExprKind::Mobius: {
        const Complex w = eval_expr(e->a, z);
        const Complex den = e->mc * w + e->md;
        if (std::abs(den) < detail::kPoleTol)
            throw evaluation_error("Moebius pole at z = " + to_string(z));
        return (e->ma * w + e->mb) / den;
    }
    }
    throw evaluation_error("corrupt expression tree");
}

// ---------------------------------------------------------------------------
// Exact symbolic differentiation

inline ExprPtr diff_expr(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::Constant: return expr_const(0.0);
    case ExprKind::Var: return expr_const(1.0);
    case ExprKind::Add: return expr_add(diff_expr(e->a), diff_expr(e->b));
    case ExprKind::Sub: return expr_sub(diff_expr(e->a), diff_expr(e->b));
    case ExprKind::Mul:
        return expr_add(expr_mul(diff_expr(e->a), e->b), expr_mul(e->a, diff_expr(e->b)));
    case ExprKind::Div:
        return expr_div(expr_sub(expr_mul(diff_expr(e->a), e->b), expr_mul(e->a, diff_expr(e->b))),
                        expr_ipow(e->b, 2));
    case ExprKind::IntPow:
        return expr_mul(expr_const(static_cast<double>(e->ipow)),
                        expr_mul(expr_ipow(e->a, e->ipow - 1), diff_expr(e->a)));
    case ExprKind::RealPow:
        return expr_mul(expr_const(e->rpow),
                        expr_mul(expr_rpow(e->a, e->rpow - 1.0), diff_expr(e->a)));
    case ExprKind::Exp:
        return expr_mul(e, diff_expr(e->a));
    case ExprKind::Log: return expr_div(diff_expr(e->a), e->a);
    case ExprKind::Mobius: {
        // d/dw (ma w + mb)/(mc w + md) = (ma md - mb mc)/(mc w + md)^2
        const Complex det = e->ma * e->md - e->mb * e->mc;
        ExprPtr den = expr_add(expr_mul(expr_const(e->mc), e->a), expr_const(e->md));
        return expr_mul(expr_const(det), expr_mul(expr_ipow(den, -2), diff_expr(e->a)));
    }
    }
    throw evaluation_error("corrupt expression tree");
}

// ---------------------------------------------------------------------------
// Composition (substitute `inner` for the variable) and structural equality

inline ExprPtr compose_expr(const ExprPtr& outer, const ExprPtr& inner) {
    switch (outer->kind) {
    case ExprKind::Constant: return outer;
    case ExprKind::Var: return inner;
    case ExprKind::Add: return expr_add(compose_expr(outer->a, inner), compose_expr(outer->b, inner));
    case ExprKind::Sub: return expr_sub(compose_expr(outer->a, inner), compose_expr(outer->b, inner));
    case ExprKind::Mul: return expr_mul(compose_expr(outer->a, inner), compose_expr(outer->b, inner));
    case ExprKind::Div: return expr_div(compose_expr(outer->a, inner), compose_expr(outer->b, inner));
    case ExprKind::IntPow: return expr_ipow(compose_expr(outer->a, inner), outer->ipow);
    case ExprKind::RealPow: return expr_rpow(compose_expr(outer->a, inner), outer->rpow);
    case ExprKind::Exp: return expr_exp(compose_expr(outer->a, inner));
    case ExprKind::Log: return expr_log(compose_expr(outer->a, inner));
    case ExprKind::Mobius:
        return expr_mobius(outer->ma, outer->mb, outer->mc, outer->md,
                           compose_expr(outer->a, inner));
    }
    throw evaluation_error("corrupt expression tree");
}

inline bool equal_trees(const ExprPtr& x, const ExprPtr& y) {
    if (x == y) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case ExprKind::Constant: return x->value == y->value;
    case ExprKind::Var: return true;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
        return equal_trees(x->a, y->a) && equal_trees(x->b, y->b);
    case ExprKind::IntPow: return x->ipow == y->ipow && equal_trees(x->a, y->a);
    case ExprKind::RealPow: return x->rpow == y->rpow && equal_trees(x->a, y->a);
    case ExprKind::Exp:
    case ExprKind::Log:
        return equal_trees(x->a, y->a);
    case ExprKind::Mobius:
        return x->ma == y->ma && x->mb == y->mb && x->mc == y->mc && x->md == y->md &&
               equal_trees(x->a, y->a);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Printing.  parse(print(t)) reproduces t node-for-node for every tree the
// grammar can express; Moebius nodes print in expanded fractional form.

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_const(Complex c) {
    if (c.imag() == 0.0) {
        if (c.real() < 0.0) return "(" + fmt_double(c.real()) + ")";
        return fmt_double(c.real());
    }
    std::string s = "(" + fmt_double(c.real());
    s += c.imag() < 0.0 ? "-" : "+";
    s += fmt_double(std::abs(c.imag()));
    s += "*i)";
    return s;
}

inline int precedence(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::IntPow:
    case ExprKind::RealPow: return 3;
    default: return 4;
    }
}

std::string print_expr(const ExprPtr& e); // forward

inline std::string print_child(const ExprPtr& e, int parent_prec, bool tight) {
    // tight: parenthesize also at equal precedence (right operands, pow bases)
    const int p = precedence(e);
    std::string s = print_expr(e);
    if (p < parent_prec || (tight && p == parent_prec)) return "(" + s + ")";
    return s;
}

inline std::string print_expr(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::Constant: return fmt_const(e->value);
    case ExprKind::Var: return "z";
    case ExprKind::Add: return print_child(e->a, 1, false) + "+" + print_child(e->b, 1, true);
    case ExprKind::Sub: return print_child(e->a, 1, false) + "-" + print_child(e->b, 1, true);
    case ExprKind::Mul: return print_child(e->a, 2, false) + "*" + print_child(e->b, 2, true);
    case ExprKind::Div: return print_child(e->a, 2, false) + "/" + print_child(e->b, 2, true);
    case ExprKind::IntPow: {
        std::string ex = std::to_string(e->ipow);
        if (e->ipow < 0) ex = "(" + ex + ")";
        return print_child(e->a, 3, true) + "^" + ex;
    }
    case ExprKind::RealPow: {
        std::string ex = fmt_double(e->rpow);
        if (e->rpow < 0) ex = "(" + ex + ")";
        return print_child(e->a, 3, true) + "^" + ex;
    }
    case ExprKind::Exp: return "exp(" + print_expr(e->a) + ")";
    case ExprKind::Log: return "log(" + print_expr(e->a) + ")";
    case ExprKind::Mobius: {
        const std::string w = "(" + print_expr(e->a) + ")";
        return "((" + fmt_const(e->ma) + "*" + w + "+" + fmt_const(e->mb) + ")/(" +
               fmt_const(e->mc) + "*" + w + "+" + fmt_const(e->md) + "))";
    }
    }
    return "?";
}

} // namespace detail

// ---------------------------------------------------------------------------
// Parser for the expression grammar
//
//   expr     := ('+'|'-')? term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' exponent)?
//   base     := number | 'i' | 'pi' | 'z' | '(' expr ')' | func '(' expr ')'
//   func     := 'exp' | 'log'
//   exponent := ('-')? number | '(' ('-')? number ')'
//   number   := decimal literal, optionally with exponent part
//
// Exponents with an integer value become integer-power nodes, all others
// principal-branch real powers.

namespace detail {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind;
    std::string text;
    double number = 0.0;
    std::size_t line = 1, col = 1;
};

inline const char* token_name(Token::Kind k) {
    switch (k) {
    case Token::Number: return "number";
    case Token::Ident: return "identifier";
    case Token::Plus: return "'+'";
    case Token::Minus: return "'-'";
    case Token::Star: return "'*'";
    case Token::Slash: return "'/'";
    case Token::Caret: return "'^'";
    case Token::LParen: return "'('";
    case Token::RParen: return "')'";
    case Token::Comma: return "','";
    case Token::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.'))
                ++j;
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    ++k;
                    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                    j = k;
                }
            }
            t.kind = Token::Number;
            t.text = std::string(text.substr(i, j - i));
            t.number = std::strtod(t.text.c_str(), nullptr);
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            t.kind = Token::Ident;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        switch (c) {
        case '+': t.kind = Token::Plus; break;
        case '-': t.kind = Token::Minus; break;
        case '*': t.kind = Token::Star; break;
        case '/': t.kind = Token::Slash; break;
        case '^': t.kind = Token::Caret; break;
        case '(': t.kind = Token::LParen; break;
        case ')': t.kind = Token::RParen; break;
        case ',': t.kind = Token::Comma; break;
        default:
            throw parse_error(std::string("unexpected character '") + c + "'", line, col);
        }
        t.text = std::string(1, c);
        advance(1);
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    ExprPtr run() {
        ExprPtr e = parse_sum();
        expect(Token::End, "operator or end of input");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    bool accept(Token::Kind k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string found = token_name(t.kind);
        if (t.kind == Token::Ident || t.kind == Token::Number)
            found += " '" + t.text + "'";
        throw parse_error("expected " + expected + ", found " + found, t.line, t.col);
    }

    void expect(Token::Kind k, const std::string& what) {
        if (!accept(k)) fail(what);
    }

    ExprPtr parse_sum() {
        bool negate = false;
        if (accept(Token::Minus))
            negate = true;
        else
            accept(Token::Plus);
        ExprPtr e = parse_term();
        if (negate) e = expr_mul(expr_const(-1.0), e);
        for (;;) {
            if (accept(Token::Plus))
                e = expr_add(e, parse_term());
            else if (accept(Token::Minus))
                e = expr_sub(e, parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (accept(Token::Star))
                e = expr_mul(e, parse_factor());
            else if (accept(Token::Slash))
                e = expr_div(e, parse_factor());
            else
                return e;
        }
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_base();
        if (!accept(Token::Caret)) return base;
        const double p = parse_exponent();
        if (std::abs(p - std::round(p)) < 1e-12 && std::abs(p) < 9e15)
            return expr_ipow(std::move(base), static_cast<long long>(std::llround(p)));
        return expr_rpow(std::move(base), p);
    }

    double parse_exponent() {
        if (accept(Token::LParen)) {
            const bool neg = accept(Token::Minus);
            if (peek().kind != Token::Number) fail("a numeric exponent");
            const double v = take().number;
            expect(Token::RParen, "')'");
            return neg ? -v : v;
        }
        const bool neg = accept(Token::Minus);
        if (peek().kind != Token::Number) fail("a numeric exponent");
        const double v = take().number;
        return neg ? -v : v;
    }

    ExprPtr parse_base() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Number:
            return expr_const(take().number);
        case Token::Ident: {
            const Token id = take();
            if (id.text == "z") return expr_var();
            if (id.text == "i") return expr_const(Complex(0.0, 1.0));
            if (id.text == "pi") return expr_const(M_PI);
            if (id.text == "exp" || id.text == "log") {
                expect(Token::LParen, "'(' after function name");
                ExprPtr arg = parse_sum();
                if (peek().kind == Token::Comma)
                    throw parse_error("function '" + id.text + "' takes exactly one argument",
                                      peek().line, peek().col);
                expect(Token::RParen, "')'");
                return id.text == "exp" ? expr_exp(std::move(arg)) : expr_log(std::move(arg));
            }
            throw parse_error("unknown identifier '" + id.text + "'", id.line, id.col);
        }
        case Token::LParen: {
            take();
            ExprPtr e = parse_sum();
            expect(Token::RParen, "')'");
            return e;
        }
        default:
            fail("a number, 'z', 'i', 'pi', '(' or a function call");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ExprPtr parse_expr_text(std::string_view text) { return detail::Parser(text).run(); }

// ---------------------------------------------------------------------------

/// Immutable holomorphic map backed by an expression tree.
class HolomorphicMap {
public:
    HolomorphicMap() : root_(expr_const(0.0)) {}
    explicit HolomorphicMap(ExprPtr root) : root_(std::move(root)) {}

    static HolomorphicMap parse(std::string_view text) {
        return HolomorphicMap(parse_expr_text(text));
    }

    Complex operator()(Complex z) const {
        const Complex v = eval_expr(root_, z);
        if (!is_finite(v))
            throw evaluation_error("evaluation overflowed at z = " + to_string(z));
        return v;
    }

    HolomorphicMap derivative() const { return HolomorphicMap(diff_expr(root_)); }

    /// this after `inner`:  (this ∘ inner)(z) = this(inner(z)).
    HolomorphicMap compose(const HolomorphicMap& inner) const {
        return HolomorphicMap(compose_expr(root_, inner.root_));
    }

    std::string str() const { return detail::print_expr(root_); }

    bool same_tree(const HolomorphicMap& o) const { return equal_trees(root_, o.root_); }

    const ExprPtr& root() const { return root_; }

    friend HolomorphicMap operator+(const HolomorphicMap& x, const HolomorphicMap& y) {
        return HolomorphicMap(expr_add(x.root_, y.root_));
    }
    friend HolomorphicMap operator-(const HolomorphicMap& x, const HolomorphicMap& y) {
        return HolomorphicMap(expr_sub(x.root_, y.root_));
    }
    friend HolomorphicMap operator*(const HolomorphicMap& x, const HolomorphicMap& y) {
        return HolomorphicMap(expr_mul(x.root_, y.root_));
    }
    friend HolomorphicMap operator/(const HolomorphicMap& x, const HolomorphicMap& y) {
        return HolomorphicMap(expr_div(x.root_, y.root_));
    }
    friend HolomorphicMap operator+(const HolomorphicMap& x, Complex c) {
        return HolomorphicMap(expr_add(x.root_, expr_const(c)));
    }
    friend HolomorphicMap operator-(const HolomorphicMap& x, Complex c) {
        return HolomorphicMap(expr_sub(x.root_, expr_const(c)));
    }
    friend HolomorphicMap operator*(Complex c, const HolomorphicMap& x) {
        return HolomorphicMap(expr_mul(expr_const(c), x.root_));
    }

private:
    ExprPtr root_;
};

inline HolomorphicMap identity_map() { return HolomorphicMap(expr_var()); }
inline HolomorphicMap constant_map(Complex c) { return HolomorphicMap(expr_const(c)); }

/// Moebius map (a z + b)/(c z + d) as a dedicated tree node.
inline HolomorphicMap mobius_map(Complex a, Complex b, Complex c, Complex d) {
    return HolomorphicMap(expr_mobius(a, b, c, d, expr_var()));
}

/// Cayley transform C_sigma(z) = (sigma + z)/(sigma - z) as a Moebius node.
inline HolomorphicMap cayley_map(BoundaryPoint sigma) {
    const Complex s = sigma.value();
    return mobius_map(1.0, s, -1.0, s);
}

/// The same Cayley transform built from grammar nodes, so it prints and
/// re-parses to itself; used by the closed-form Koenigs families.
inline HolomorphicMap cayley_expr(BoundaryPoint sigma) {
    const ExprPtr s = expr_const(sigma.value());
    return HolomorphicMap(expr_div(expr_add(s, expr_var()), expr_sub(s, expr_var())));
}

/// The unique Moebius map sending z1,z2,z3 to w1,w2,w3.
inline HolomorphicMap mobius_through(Complex z1, Complex z2, Complex z3, Complex w1, Complex w2,
                                     Complex w3) {
    // S_p(u) = (u - p1)(p2 - p3) / ((u - p3)(p2 - p1)) sends p1,p2,p3 to 0,1,inf.
    auto coeffs = [](Complex p1, Complex p2, Complex p3) {
        return std::array<Complex, 4>{p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1)};
    };
    const auto sz = coeffs(z1, z2, z3);
    const auto sw = coeffs(w1, w2, w3);
    // M = S_w^{-1} * S_z as 2x2 matrices; inverse of (a b; c d) is (d -b; -c a).
    const Complex a = sw[3] * sz[0] - sw[1] * sz[2];
    const Complex b = sw[3] * sz[1] - sw[1] * sz[3];
    const Complex c = -sw[2] * sz[0] + sw[0] * sz[2];
    const Complex d = -sw[2] * sz[1] + sw[0] * sz[3];
    return mobius_map(a, b, c, d);
}

} // namespace koenigs
