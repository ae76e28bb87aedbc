#pragma once

// Scalar fields on R^3 given as expression trees in x1, x2, x3.
// Immutable after construction; evaluation, differentiation and printing
// are pure, so fields can be shared across threads freely.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cms {

struct Point3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    double coord(int axis) const {
        switch (axis) {
            case 1: return x1;
            case 2: return x2;
            case 3: return x3;
        }
        throw std::out_of_range("Point3::coord: axis must be 1, 2 or 3");
    }

    bool finite() const {
        return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
    }
};

// Syntax error with the byte offset it occurred at and the token set that
// would have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
        : std::runtime_error(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

// Domain error during evaluation (division by zero, ln of a non-positive
// value, sqrt of a negative value, ...). Carries the printed subexpression
// that failed.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string message, std::string subexpression)
        : std::runtime_error(std::move(message)), subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

class ScalarField {
public:
    enum class Kind { Literal, Variable, Unary, Binary };
    enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Ln, Sqrt };
    enum class BinaryOp { Add, Sub, Mul, Div, Pow };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        Kind kind;
        double value = 0.0;       // Literal
        int axis = 0;             // Variable: 1..3
        UnaryOp uop = UnaryOp::Neg;
        BinaryOp bop = BinaryOp::Add;
        NodePtr lhs;
        NodePtr rhs;
    };

    // Default: the zero field.
    ScalarField() : root_(literal_node(0.0)) {}

    static ScalarField literal(double v) { return ScalarField(literal_node(v)); }

    static ScalarField variable(int axis) {
        if (axis < 1 || axis > 3) throw std::out_of_range("variable axis must be 1, 2 or 3");
        auto n = std::make_shared<Node>();
        n->kind = Kind::Variable;
        n->axis = axis;
        return ScalarField(std::move(n));
    }

    double evaluate(const Point3& p) const { return eval(root_, p); }
    double operator()(const Point3& p) const { return evaluate(p); }

    // Exact symbolic partial derivative with respect to x<axis>, constant
    // folded on the way out.
    ScalarField differentiate(int axis) const {
        if (axis < 1 || axis > 3) throw std::out_of_range("derivative axis must be 1, 2 or 3");
        return ScalarField(diff(root_, axis));
    }

    std::string str() const {
        std::string out;
        print(root_, out);
        return out;
    }

    // Structural test: does any node reference x<axis>?
    bool depends_on(int axis) const { return references(root_, axis); }

    bool is_literal() const { return root_->kind == Kind::Literal; }
    bool is_literal_zero() const { return is_literal() && root_->value == 0.0; }
    double literal_value() const { return root_->value; }

    const NodePtr& root() const { return root_; }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
        return ScalarField(binary(BinaryOp::Add, a.root_, b.root_));
    }
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b) {
        return ScalarField(binary(BinaryOp::Sub, a.root_, b.root_));
    }
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
        return ScalarField(binary(BinaryOp::Mul, a.root_, b.root_));
    }
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b) {
        return ScalarField(binary(BinaryOp::Div, a.root_, b.root_));
    }
    friend ScalarField operator-(const ScalarField& a) {
        return ScalarField(unary(UnaryOp::Neg, a.root_));
    }

    static ScalarField pow(const ScalarField& base, const ScalarField& exponent) {
        return ScalarField(binary(BinaryOp::Pow, base.root_, exponent.root_));
    }
    static ScalarField apply(UnaryOp op, const ScalarField& arg) {
        return ScalarField(unary(op, arg.root_));
    }

    static std::string format_double(double v) {
        if (v == 0.0) return "0";  // avoid "-0"
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

private:
    explicit ScalarField(NodePtr root) : root_(std::move(root)) {}

    static NodePtr literal_node(double v) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Literal;
        n->value = v;
        return n;
    }

    static bool is_lit(const NodePtr& n, double v) {
        return n->kind == Kind::Literal && n->value == v;
    }

    // Smart constructors: collapse literal arithmetic and the identities
    // 0*x, x*1, x+0, x-0, x/1, x^1, x^0, -(-x). No further simplification.
    static NodePtr unary(UnaryOp op, NodePtr a) {
        if (a->kind == Kind::Literal) {
            double v = a->value;
            double r;
            bool ok = true;
            switch (op) {
                case UnaryOp::Neg: r = -v; break;
                case UnaryOp::Sin: r = std::sin(v); break;
                case UnaryOp::Cos: r = std::cos(v); break;
                case UnaryOp::Tan: r = std::tan(v); break;
                case UnaryOp::Exp: r = std::exp(v); break;
                case UnaryOp::Ln:  ok = v > 0.0; r = ok ? std::log(v) : 0.0; break;
                case UnaryOp::Sqrt: ok = v >= 0.0; r = ok ? std::sqrt(v) : 0.0; break;
                default: ok = false; r = 0.0; break;
            }
            if (ok && std::isfinite(r)) return literal_node(r);
        }
        if (op == UnaryOp::Neg && a->kind == Kind::Unary && a->uop == UnaryOp::Neg) return a->lhs;
        auto n = std::make_shared<Node>();
        n->kind = Kind::Unary;
        n->uop = op;
        n->lhs = std::move(a);
        return n;
    }

    static NodePtr binary(BinaryOp op, NodePtr a, NodePtr b) {
        if (a->kind == Kind::Literal && b->kind == Kind::Literal) {
            double x = a->value, y = b->value;
            double r = 0.0;
            bool ok = true;
            switch (op) {
                case BinaryOp::Add: r = x + y; break;
                case BinaryOp::Sub: r = x - y; break;
                case BinaryOp::Mul: r = x * y; break;
                case BinaryOp::Div: ok = y != 0.0; r = ok ? x / y : 0.0; break;
                case BinaryOp::Pow: {
                    r = eval_pow(x, y, &ok);
                    break;
                }
            }
            if (ok && std::isfinite(r)) return literal_node(r);
        }
        switch (op) {
            case BinaryOp::Add:
                if (is_lit(a, 0.0)) return b;
                if (is_lit(b, 0.0)) return a;
                break;
            case BinaryOp::Sub:
                if (is_lit(b, 0.0)) return a;
                if (is_lit(a, 0.0)) return unary(UnaryOp::Neg, std::move(b));
                break;
            case BinaryOp::Mul:
                if (is_lit(a, 0.0) || is_lit(b, 0.0)) return literal_node(0.0);
                if (is_lit(a, 1.0)) return b;
                if (is_lit(b, 1.0)) return a;
                if (is_lit(a, -1.0)) return unary(UnaryOp::Neg, std::move(b));
                if (is_lit(b, -1.0)) return unary(UnaryOp::Neg, std::move(a));
                break;
            case BinaryOp::Div:
                if (is_lit(a, 0.0)) return literal_node(0.0);
                if (is_lit(b, 1.0)) return a;
                break;
            case BinaryOp::Pow:
                if (is_lit(b, 1.0)) return a;
                if (is_lit(b, 0.0)) return literal_node(1.0);
                break;
        }
        auto n = std::make_shared<Node>();
        n->kind = Kind::Binary;
        n->bop = op;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }

    static bool integral_exponent(double e) {
        return std::nearbyint(e) == e && std::abs(e) <= 9.0e15;
    }

    // Power rules: integer exponents are valid for any base; non-integer
    // exponents require a positive base; 0^0 = 1, 0^negative is a domain
    // error.
    static double eval_pow(double base, double exponent, bool* ok) {
        *ok = true;
        if (base == 0.0) {
            if (exponent > 0.0) return 0.0;
            if (exponent == 0.0) return 1.0;
            *ok = false;
            return 0.0;
        }
        if (base < 0.0 && !integral_exponent(exponent)) {
            *ok = false;
            return 0.0;
        }
        return std::pow(base, exponent);
    }

    static double eval(const NodePtr& n, const Point3& p) {
        switch (n->kind) {
            case Kind::Literal: return n->value;
            case Kind::Variable: return p.coord(n->axis);
            case Kind::Unary: {
                double a = eval(n->lhs, p);
                switch (n->uop) {
                    case UnaryOp::Neg: return -a;
                    case UnaryOp::Sin: return std::sin(a);
                    case UnaryOp::Cos: return std::cos(a);
                    case UnaryOp::Tan: return std::tan(a);
                    case UnaryOp::Exp: return std::exp(a);
                    case UnaryOp::Ln:
                        if (a <= 0.0) fail(n, "ln of a non-positive value");
                        return std::log(a);
                    case UnaryOp::Sqrt:
                        if (a < 0.0) fail(n, "sqrt of a negative value");
                        return std::sqrt(a);
                }
                break;
            }
            case Kind::Binary: {
                double a = eval(n->lhs, p);
                double b = eval(n->rhs, p);
                switch (n->bop) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div:
                        if (b == 0.0) fail(n, "division by zero");
                        return a / b;
                    case BinaryOp::Pow: {
                        bool ok = true;
                        double r = eval_pow(a, b, &ok);
                        if (!ok) {
                            fail(n, a == 0.0 ? "zero raised to a negative power"
                                             : "negative base with non-integer exponent");
                        }
                        return r;
                    }
                }
                break;
            }
        }
        throw std::logic_error("ScalarField: corrupt node");
    }

    [[noreturn]] static void fail(const NodePtr& n, const char* what) {
        std::string sub;
        print(n, sub);
        throw EvalError(std::string(what) + " in '" + sub + "'", sub);
    }

    static NodePtr diff(const NodePtr& n, int axis) {
        switch (n->kind) {
            case Kind::Literal: return literal_node(0.0);
            case Kind::Variable: return literal_node(n->axis == axis ? 1.0 : 0.0);
            case Kind::Unary: {
                NodePtr da = diff(n->lhs, axis);
                switch (n->uop) {
                    case UnaryOp::Neg: return unary(UnaryOp::Neg, da);
                    case UnaryOp::Sin: return binary(BinaryOp::Mul, unary(UnaryOp::Cos, n->lhs), da);
                    case UnaryOp::Cos:
                        return unary(UnaryOp::Neg,
                                     binary(BinaryOp::Mul, unary(UnaryOp::Sin, n->lhs), da));
                    case UnaryOp::Tan: {
                        NodePtr c = unary(UnaryOp::Cos, n->lhs);
                        return binary(BinaryOp::Div, da, binary(BinaryOp::Mul, c, c));
                    }
                    case UnaryOp::Exp: return binary(BinaryOp::Mul, unary(UnaryOp::Exp, n->lhs), da);
                    case UnaryOp::Ln: return binary(BinaryOp::Div, da, n->lhs);
                    case UnaryOp::Sqrt:
                        return binary(BinaryOp::Div, da,
                                      binary(BinaryOp::Mul, literal_node(2.0),
                                             unary(UnaryOp::Sqrt, n->lhs)));
                }
                break;
            }
            case Kind::Binary: {
                const NodePtr& f = n->lhs;
                const NodePtr& g = n->rhs;
                switch (n->bop) {
                    case BinaryOp::Add: return binary(BinaryOp::Add, diff(f, axis), diff(g, axis));
                    case BinaryOp::Sub: return binary(BinaryOp::Sub, diff(f, axis), diff(g, axis));
                    case BinaryOp::Mul:
                        return binary(BinaryOp::Add, binary(BinaryOp::Mul, diff(f, axis), g),
                                      binary(BinaryOp::Mul, f, diff(g, axis)));
                    case BinaryOp::Div: {
                        NodePtr num = binary(BinaryOp::Sub, binary(BinaryOp::Mul, diff(f, axis), g),
                                             binary(BinaryOp::Mul, f, diff(g, axis)));
                        return binary(BinaryOp::Div, num, binary(BinaryOp::Mul, g, g));
                    }
                    case BinaryOp::Pow: {
                        if (g->kind == Kind::Literal) {
                            // c * f^(c-1) * f'
                            NodePtr p = binary(BinaryOp::Pow, f, literal_node(g->value - 1.0));
                            return binary(BinaryOp::Mul, literal_node(g->value),
                                          binary(BinaryOp::Mul, p, diff(f, axis)));
                        }
                        // f^g * (g' ln f + g f'/f), defined where f > 0
                        NodePtr t1 = binary(BinaryOp::Mul, diff(g, axis), unary(UnaryOp::Ln, f));
                        NodePtr t2 = binary(BinaryOp::Mul, g, binary(BinaryOp::Div, diff(f, axis), f));
                        return binary(BinaryOp::Mul, binary(BinaryOp::Pow, f, g),
                                      binary(BinaryOp::Add, t1, t2));
                    }
                }
                break;
            }
        }
        throw std::logic_error("ScalarField: corrupt node");
    }

    static bool references(const NodePtr& n, int axis) {
        switch (n->kind) {
            case Kind::Literal: return false;
            case Kind::Variable: return n->axis == axis;
            case Kind::Unary: return references(n->lhs, axis);
            case Kind::Binary: return references(n->lhs, axis) || references(n->rhs, axis);
        }
        return false;
    }

    // Printing precedence; negative literals print like a negation.
    static int precedence(const NodePtr& n) {
        switch (n->kind) {
            case Kind::Literal: return n->value < 0.0 ? 3 : 5;
            case Kind::Variable: return 5;
            case Kind::Unary: return n->uop == UnaryOp::Neg ? 3 : 5;
            case Kind::Binary:
                switch (n->bop) {
                    case BinaryOp::Add:
                    case BinaryOp::Sub: return 1;
                    case BinaryOp::Mul:
                    case BinaryOp::Div: return 2;
                    case BinaryOp::Pow: return 4;
                }
        }
        return 5;
    }

    static void print_child(const NodePtr& child, int parent_prec, bool tight, std::string& out) {
        bool parens = precedence(child) < parent_prec || (tight && precedence(child) == parent_prec);
        if (parens) out += '(';
        print(child, out);
        if (parens) out += ')';
    }

    static void print(const NodePtr& n, std::string& out) {
        switch (n->kind) {
            case Kind::Literal:
                out += format_double(n->value);
                return;
            case Kind::Variable:
                out += 'x';
                out += static_cast<char>('0' + n->axis);
                return;
            case Kind::Unary:
                switch (n->uop) {
                    case UnaryOp::Neg:
                        out += '-';
                        print_child(n->lhs, 3, true, out);
                        return;
                    case UnaryOp::Sin: out += "sin"; break;
                    case UnaryOp::Cos: out += "cos"; break;
                    case UnaryOp::Tan: out += "tan"; break;
                    case UnaryOp::Exp: out += "exp"; break;
                    case UnaryOp::Ln: out += "ln"; break;
                    case UnaryOp::Sqrt: out += "sqrt"; break;
                }
                out += '(';
                print(n->lhs, out);
                out += ')';
                return;
            case Kind::Binary: {
                int prec = precedence(n);
                char sym = ' ';
                bool tight_rhs = false;
                switch (n->bop) {
                    case BinaryOp::Add: sym = '+'; break;
                    case BinaryOp::Sub: sym = '-'; tight_rhs = true; break;
                    case BinaryOp::Mul: sym = '*'; break;
                    case BinaryOp::Div: sym = '/'; tight_rhs = true; break;
                    case BinaryOp::Pow: sym = '^'; tight_rhs = true; break;
                }
                print_child(n->lhs, prec, false, out);
                out += sym;
                // `a- -b` stays parenthesised for readability
                bool rhs_neg = precedence(n->rhs) == 3;
                print_child(n->rhs, prec, tight_rhs || ((sym == '+' || sym == '-') && rhs_neg), out);
                return;
            }
        }
    }

    NodePtr root_;

    friend class Parser;
};

namespace detail {

class Lexer {
public:
    enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

    struct Token {
        Tok kind;
        std::size_t offset;
        std::string text;
        double value = 0.0;
    };

    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& current() const { return tok_; }

    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, pos_, "<end of input>", 0.0};
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': tok_ = {Tok::Plus, pos_++, "+"}; return;
            case '-': tok_ = {Tok::Minus, pos_++, "-"}; return;
            case '*': tok_ = {Tok::Star, pos_++, "*"}; return;
            case '/': tok_ = {Tok::Slash, pos_++, "/"}; return;
            case '^': tok_ = {Tok::Caret, pos_++, "^"}; return;
            case '(': tok_ = {Tok::LParen, pos_++, "("}; return;
            case ')': tok_ = {Tok::RParen, pos_++, ")"}; return;
            default: break;
        }
        if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
            lex_number();
            return;
        }
        if (is_alpha(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
            tok_ = {Tok::Ident, start, std::string(src_.substr(start, pos_ - start))};
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                             std::to_string(pos_),
                         pos_, {"number", "identifier", "'('", "operator"});
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && is_digit(src_[pos_])) {
                while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
            } else {
                pos_ = mark;  // bare 'e' after a number is not an exponent
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        tok_ = {Tok::Number, start, text, std::strtod(text.c_str(), nullptr)};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

}  // namespace detail

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    ScalarField parse() {
        ScalarField::NodePtr e = expression(0);
        if (lex_.current().kind != detail::Lexer::Tok::End) {
            unexpected({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        }
        return ScalarField(std::move(e));
    }

private:
    using Tok = detail::Lexer::Tok;
    using NodePtr = ScalarField::NodePtr;
    using B = ScalarField::BinaryOp;
    using U = ScalarField::UnaryOp;

    static constexpr int kMaxDepth = 256;

    [[noreturn]] void unexpected(std::vector<std::string> expected) {
        const auto& t = lex_.current();
        std::string msg = "syntax error at offset " + std::to_string(t.offset) + ": unexpected '" +
                          t.text + "', expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
            msg += expected[i];
        }
        throw ParseError(msg, t.offset, std::move(expected));
    }

    void check_depth(int depth) {
        if (depth > kMaxDepth)
            throw ParseError("expression nested deeper than " + std::to_string(kMaxDepth),
                             lex_.current().offset, {});
    }

    NodePtr expression(int depth) {
        check_depth(depth);
        NodePtr lhs = term(depth + 1);
        while (lex_.current().kind == Tok::Plus || lex_.current().kind == Tok::Minus) {
            B op = lex_.current().kind == Tok::Plus ? B::Add : B::Sub;
            lex_.advance();
            lhs = ScalarField::binary(op, lhs, term(depth + 1));
        }
        return lhs;
    }

    NodePtr term(int depth) {
        check_depth(depth);
        NodePtr lhs = factor(depth + 1);
        while (lex_.current().kind == Tok::Star || lex_.current().kind == Tok::Slash) {
            B op = lex_.current().kind == Tok::Star ? B::Mul : B::Div;
            lex_.advance();
            lhs = ScalarField::binary(op, lhs, factor(depth + 1));
        }
        return lhs;
    }

    NodePtr factor(int depth) {
        check_depth(depth);
        if (lex_.current().kind == Tok::Minus) {
            lex_.advance();
            return ScalarField::unary(U::Neg, factor(depth + 1));
        }
        return power(depth + 1);
    }

    NodePtr power(int depth) {
        check_depth(depth);
        NodePtr lhs = atom(depth + 1);
        while (lex_.current().kind == Tok::Caret) {
            lex_.advance();
            lhs = ScalarField::binary(B::Pow, lhs, exponent(depth + 1));
        }
        return lhs;
    }

    // The exponent position admits a leading minus: x^-2 parses as x^(-2).
    NodePtr exponent(int depth) {
        check_depth(depth);
        if (lex_.current().kind == Tok::Minus) {
            lex_.advance();
            return ScalarField::unary(U::Neg, exponent(depth + 1));
        }
        return atom(depth + 1);
    }

    NodePtr atom(int depth) {
        check_depth(depth);
        const auto& t = lex_.current();
        switch (t.kind) {
            case Tok::Number: {
                double v = t.value;
                lex_.advance();
                return ScalarField::literal_node(v);
            }
            case Tok::LParen: {
                lex_.advance();
                NodePtr e = expression(depth + 1);
                if (lex_.current().kind != Tok::RParen) unexpected({"')'"});
                lex_.advance();
                return e;
            }
            case Tok::Ident: {
                std::string name = t.text;
                if (name == "x1" || name == "x2" || name == "x3") {
                    lex_.advance();
                    return ScalarField::variable(name[1] - '0').root();
                }
                if (name == "pi") {
                    lex_.advance();
                    return ScalarField::literal_node(3.14159265358979323846);
                }
                if (name == "e") {
                    lex_.advance();
                    return ScalarField::literal_node(2.71828182845904523536);
                }
                U op;
                if (name == "sin") op = U::Sin;
                else if (name == "cos") op = U::Cos;
                else if (name == "tan") op = U::Tan;
                else if (name == "exp") op = U::Exp;
                else if (name == "ln") op = U::Ln;
                else if (name == "sqrt") op = U::Sqrt;
                else
                    unexpected({"'x1'", "'x2'", "'x3'", "'pi'", "'e'",
                                "'sin'", "'cos'", "'tan'", "'exp'", "'ln'", "'sqrt'"});
                lex_.advance();
                if (lex_.current().kind != Tok::LParen) unexpected({"'('"});
                lex_.advance();
                NodePtr arg = expression(depth + 1);
                if (lex_.current().kind != Tok::RParen) unexpected({"')'"});
                lex_.advance();
                return ScalarField::unary(op, arg);
            }
            default:
                unexpected({"number", "variable", "function", "constant", "'-'", "'('"});
        }
    }

    detail::Lexer lex_;
};

inline ScalarField parse_field(std::string_view text) {
    if (text.empty()) throw ParseError("empty expression", 0, {"expression"});
    return Parser(text).parse();
}

}  // namespace cms
