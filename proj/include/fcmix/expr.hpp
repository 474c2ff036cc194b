#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "fcmix/common.hpp"

namespace fcmix {

/// Compiled scalar expression over a point x in R^d.
using ScalarExpr = std::function<double(const Vec&)>;

namespace expr_detail {

// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := ('-')* primary
//   primary := number | 'norm' | 'x'<idx> | func '(' expr (',' expr)? ')' | '(' expr ')'
//   func    := sin | cos | abs | min | pow
struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    int dim;

    Parser(const std::string& s, int d) : src(s), dim(d) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression error at position " + std::to_string(pos) +
                                    ": " + msg + " in '" + src + "'");
    }

    ScalarExpr parse() {
        ScalarExpr e = expr();
        skip_ws();
        if (pos != src.size()) fail("trailing input");
        return e;
    }

    ScalarExpr expr() {
        ScalarExpr lhs = term();
        for (;;) {
            if (eat('+')) {
                ScalarExpr rhs = term();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) + rhs(x); };
            } else if (eat('-')) {
                ScalarExpr rhs = term();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) - rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    ScalarExpr term() {
        ScalarExpr lhs = factor();
        for (;;) {
            if (eat('*')) {
                ScalarExpr rhs = factor();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) * rhs(x); };
            } else if (eat('/')) {
                ScalarExpr rhs = factor();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) / rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    ScalarExpr factor() {
        if (eat('-')) {
            ScalarExpr e = factor();
            return [e](const Vec& x) { return -e(x); };
        }
        return primary();
    }

    ScalarExpr primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        const char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const double v = std::stod(src.substr(pos), &used);
            pos += used;
            return [v](const Vec&) { return v; };
        }
        if (c == '(') {
            ++pos;
            ScalarExpr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                ++pos;
            const std::string id = src.substr(start, pos - start);
            if (id == "norm") return [](const Vec& x) { return x.norm(); };
            if (id.size() >= 2 && id[0] == 'x') {
                const int k = std::atoi(id.c_str() + 1);
                if (k < 1 || k > dim) fail("coordinate " + id + " out of range for dim " +
                                           std::to_string(dim));
                return [k](const Vec& x) { return x[k - 1]; };
            }
            if (id == "sin" || id == "cos" || id == "abs") {
                if (!eat('(')) fail("expected '(' after " + id);
                ScalarExpr a = expr();
                if (!eat(')')) fail("expected ')'");
                if (id == "sin") return [a](const Vec& x) { return std::sin(a(x)); };
                if (id == "cos") return [a](const Vec& x) { return std::cos(a(x)); };
                return [a](const Vec& x) { return std::abs(a(x)); };
            }
            if (id == "min" || id == "pow") {
                if (!eat('(')) fail("expected '(' after " + id);
                ScalarExpr a = expr();
                if (!eat(',')) fail("expected ',' in " + id);
                ScalarExpr b = expr();
                if (!eat(')')) fail("expected ')'");
                if (id == "min") return [a, b](const Vec& x) { return std::min(a(x), b(x)); };
                return [a, b](const Vec& x) { return std::pow(a(x), b(x)); };
            }
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace expr_detail

/// Compile a closed-form scalar expression in the coordinates x1..xd, the
/// Euclidean norm `norm`, and the functions sin, cos, abs, min, pow.
inline ScalarExpr parse_expression(const std::string& text, int dim) {
    expr_detail::Parser p(text, dim);
    return p.parse();
}

} // namespace fcmix
