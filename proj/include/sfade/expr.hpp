#ifndef SFADE_EXPR_HPP
#define SFADE_EXPR_HPP

// Small arithmetic expression language over the variables x and t, used for
// user-defined problem files.
//
// Precedence (loosest to tightest): + -  |  * /  |  unary -  |  ^ (right
// associative). Built-in functions: sin cos exp sqrt abs gamma fresnelc
// fresnels, plus the special form
//   piecewise((lo, hi, value), ..., default)
// which selects by lo <= x < hi; lo and hi must be constant expressions and
// the intervals must not overlap.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sfade/specfun.hpp"

namespace sfade {

class ExprError : public std::runtime_error {
public:
    ExprError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class Expr {
public:
    enum class Kind { number, var_x, var_t, neg, add, sub, mul, div, pow, call, piecewise };
    enum class Fn { sin, cos, exp, sqrt, abs, gamma, fresnelc, fresnels };

    struct Node {
        Kind kind = Kind::number;
        double number = 0.0;
        Fn fn = Fn::sin;
        std::vector<Node> kids;
        // piecewise: intervals[i] guards kids[i]; kids.back() is the default
        std::vector<std::pair<double, double>> intervals;
    };

    Expr() = default;

    static Expr parse(const std::string& text);

    double eval(double x, double t) const { return eval_node(root_, x, t); }

    std::string str() const {
        std::ostringstream os;
        print_node(root_, os);
        return os.str();
    }

    bool uses_t() const { return uses_t_node(root_); }
    bool is_zero_literal() const { return root_.kind == Kind::number && root_.number == 0.0; }

private:
    Node root_;

    static double eval_node(const Node& n, double x, double t) {
        switch (n.kind) {
        case Kind::number: return n.number;
        case Kind::var_x: return x;
        case Kind::var_t: return t;
        case Kind::neg: return -eval_node(n.kids[0], x, t);
        case Kind::add: return eval_node(n.kids[0], x, t) + eval_node(n.kids[1], x, t);
        case Kind::sub: return eval_node(n.kids[0], x, t) - eval_node(n.kids[1], x, t);
        case Kind::mul: return eval_node(n.kids[0], x, t) * eval_node(n.kids[1], x, t);
        case Kind::div: return eval_node(n.kids[0], x, t) / eval_node(n.kids[1], x, t);
        case Kind::pow:
            return std::pow(eval_node(n.kids[0], x, t), eval_node(n.kids[1], x, t));
        case Kind::call: {
            const double v = eval_node(n.kids[0], x, t);
            switch (n.fn) {
            case Fn::sin: return std::sin(v);
            case Fn::cos: return std::cos(v);
            case Fn::exp: return std::exp(v);
            case Fn::sqrt: return std::sqrt(v);
            case Fn::abs: return std::fabs(v);
            case Fn::gamma: return sfade::gamma(v);
            case Fn::fresnelc: return fresnel_c(v);
            case Fn::fresnels: return fresnel_s(v);
            }
            break;
        }
        case Kind::piecewise:
            for (std::size_t i = 0; i < n.intervals.size(); ++i)
                if (n.intervals[i].first <= x && x < n.intervals[i].second)
                    return eval_node(n.kids[i], x, t);
            return eval_node(n.kids.back(), x, t);
        }
        throw std::logic_error("Expr: corrupt node");
    }

    static const char* fn_name(Fn f) {
        switch (f) {
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
        case Fn::exp: return "exp";
        case Fn::sqrt: return "sqrt";
        case Fn::abs: return "abs";
        case Fn::gamma: return "gamma";
        case Fn::fresnelc: return "fresnelc";
        case Fn::fresnels: return "fresnels";
        }
        return "?";
    }

    static void print_number(double v, std::ostream& os) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    }

    static void print_node(const Node& n, std::ostream& os) {
        switch (n.kind) {
        case Kind::number: print_number(n.number, os); return;
        case Kind::var_x: os << 'x'; return;
        case Kind::var_t: os << 't'; return;
        case Kind::neg:
            os << "(-";
            print_node(n.kids[0], os);
            os << ')';
            return;
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div:
        case Kind::pow: {
            const char op = n.kind == Kind::add   ? '+'
                            : n.kind == Kind::sub ? '-'
                            : n.kind == Kind::mul ? '*'
                            : n.kind == Kind::div ? '/'
                                                  : '^';
            os << '(';
            print_node(n.kids[0], os);
            os << op;
            print_node(n.kids[1], os);
            os << ')';
            return;
        }
        case Kind::call:
            os << fn_name(n.fn) << '(';
            print_node(n.kids[0], os);
            os << ')';
            return;
        case Kind::piecewise:
            os << "piecewise(";
            for (std::size_t i = 0; i < n.intervals.size(); ++i) {
                os << '(';
                print_number(n.intervals[i].first, os);
                os << ',';
                print_number(n.intervals[i].second, os);
                os << ',';
                print_node(n.kids[i], os);
                os << "),";
            }
            print_node(n.kids.back(), os);
            os << ')';
            return;
        }
    }

    static bool uses_t_node(const Node& n) {
        if (n.kind == Kind::var_t) return true;
        for (const auto& k : n.kids)
            if (uses_t_node(k)) return true;
        return false;
    }

    static bool uses_var_node(const Node& n) {
        if (n.kind == Kind::var_t || n.kind == Kind::var_x) return true;
        for (const auto& k : n.kids)
            if (uses_var_node(k)) return true;
        return false;
    }

    class Parser {
    public:
        explicit Parser(const std::string& s) : s_(s) {}

        Node run() {
            Node n = parse_expr();
            skip_ws();
            if (pos_ != s_.size()) fail("unexpected trailing input");
            return n;
        }

    private:
        const std::string& s_;
        std::size_t pos_ = 0;

        [[noreturn]] void fail(const std::string& msg) const { throw ExprError(msg, pos_); }

        void skip_ws() {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }

        char peek() {
            skip_ws();
            return pos_ < s_.size() ? s_[pos_] : '\0';
        }

        bool consume(char c) {
            if (peek() == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        void expect(char c) {
            if (!consume(c)) fail(std::string("expected '") + c + "'");
        }

        Node parse_expr() {
            Node lhs = parse_term();
            for (;;) {
                const char c = peek();
                if (c != '+' && c != '-') return lhs;
                ++pos_;
                Node n;
                n.kind = c == '+' ? Kind::add : Kind::sub;
                n.kids.push_back(std::move(lhs));
                n.kids.push_back(parse_term());
                lhs = std::move(n);
            }
        }

        Node parse_term() {
            Node lhs = parse_factor();
            for (;;) {
                const char c = peek();
                if (c != '*' && c != '/') return lhs;
                ++pos_;
                Node n;
                n.kind = c == '*' ? Kind::mul : Kind::div;
                n.kids.push_back(std::move(lhs));
                n.kids.push_back(parse_factor());
                lhs = std::move(n);
            }
        }

        Node parse_factor() {
            if (consume('-')) {
                Node n;
                n.kind = Kind::neg;
                n.kids.push_back(parse_factor());
                return n;
            }
            return parse_power();
        }

        Node parse_power() {
            Node base = parse_primary();
            if (peek() == '^') {
                ++pos_;
                Node n;
                n.kind = Kind::pow;
                n.kids.push_back(std::move(base));
                n.kids.push_back(parse_factor()); // right-assoc, allows -x in exponent
                return n;
            }
            return base;
        }

        Node parse_primary() {
            const char c = peek();
            if (c == '(') {
                ++pos_;
                Node n = parse_expr();
                expect(')');
                return n;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
            fail("expected a number, variable, function or '('");
        }

        Node parse_number() {
            skip_ws();
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("invalid number");
            pos_ += static_cast<std::size_t>(end - begin);
            Node n;
            n.kind = Kind::number;
            n.number = v;
            return n;
        }

        Node parse_ident() {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") {
                Node n;
                n.kind = Kind::var_x;
                return n;
            }
            if (name == "t") {
                Node n;
                n.kind = Kind::var_t;
                return n;
            }
            if (name == "piecewise") return parse_piecewise();
            static const std::pair<const char*, Fn> table[] = {
                {"sin", Fn::sin},     {"cos", Fn::cos},     {"exp", Fn::exp},
                {"sqrt", Fn::sqrt},   {"abs", Fn::abs},
                {"gamma", Fn::gamma}, {"fresnelc", Fn::fresnelc},
                {"fresnels", Fn::fresnels}};
            for (const auto& [nm, fn] : table) {
                if (name == nm) {
                    expect('(');
                    Node n;
                    n.kind = Kind::call;
                    n.fn = fn;
                    n.kids.push_back(parse_expr());
                    expect(')');
                    return n;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }

        double constant_bound(const Node& n) {
            if (uses_var_node(n)) fail("piecewise interval bounds must be constant");
            return eval_node(n, 0.0, 0.0);
        }

        Node parse_piecewise() {
            expect('(');
            Node n;
            n.kind = Kind::piecewise;
            for (;;) {
                if (peek() == '(') {
                    // either a piece "(lo, hi, value)" or a parenthesized default
                    ++pos_;
                    Node first = parse_expr();
                    if (consume(',')) {
                        const double lo = constant_bound(first);
                        Node hi_expr = parse_expr();
                        const double hi = constant_bound(hi_expr);
                        if (!(lo < hi)) fail("piecewise interval requires lo < hi");
                        expect(',');
                        Node value = parse_expr();
                        expect(')');
                        n.intervals.emplace_back(lo, hi);
                        n.kids.push_back(std::move(value));
                        expect(',');
                        continue;
                    }
                    expect(')');
                    n.kids.push_back(std::move(first)); // parenthesized default
                    break;
                }
                n.kids.push_back(parse_expr()); // default
                break;
            }
            expect(')');
            // non-overlap check on the half-open intervals
            auto sorted = n.intervals;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 1; i < sorted.size(); ++i)
                if (sorted[i].first < sorted[i - 1].second)
                    fail("piecewise intervals overlap");
            return n;
        }
    };
};

inline Expr Expr::parse(const std::string& text) {
    Expr e;
    e.root_ = Parser(text).run();
    return e;
}

/// Parse an expression over x and t (throws ExprError with offset on failure).
inline Expr parse_expr(const std::string& text) { return Expr::parse(text); }

/// Evaluate a parsed expression.
inline double eval_expr(const Expr& e, double x, double t) { return e.eval(x, t); }

} // namespace sfade

#endif
