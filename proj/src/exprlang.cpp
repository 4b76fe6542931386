#include "hq/exprlang.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>

namespace hq {

namespace detail {

enum class UnOp { Neg, Exp, Log, Sqrt, Sin, Cos, Abs };
enum class BinOp { Add, Sub, Mul, Div, Pow };

struct ExprNode {
    enum class Kind { Const, VarU, VarX, VarP, VarR, VarQ, Unary, Binary };
    Kind kind;
    std::size_t offset = 0;  // byte offset of the defining token
    double cval = 0.0;
    int axis = 0;  // 0-based, for VarX / VarP
    UnOp un = UnOp::Neg;
    BinOp bin = BinOp::Add;
    std::shared_ptr<const ExprNode> a, b;
};

}  // namespace detail

using detail::BinOp;
using detail::ExprNode;
using detail::UnOp;
using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

namespace {

NodePtr leaf(Kind k, std::size_t off) {
    auto nd = std::make_shared<ExprNode>();
    nd->kind = k;
    nd->offset = off;
    return nd;
}

NodePtr constant(double v, std::size_t off) {
    auto nd = std::make_shared<ExprNode>();
    nd->kind = Kind::Const;
    nd->offset = off;
    nd->cval = v;
    return nd;
}

NodePtr axis_var(Kind k, int axis, std::size_t off) {
    auto nd = std::make_shared<ExprNode>();
    nd->kind = k;
    nd->offset = off;
    nd->axis = axis;
    return nd;
}

NodePtr unary(UnOp op, NodePtr a, std::size_t off) {
    auto nd = std::make_shared<ExprNode>();
    nd->kind = Kind::Unary;
    nd->offset = off;
    nd->un = op;
    nd->a = std::move(a);
    return nd;
}

NodePtr binary(BinOp op, NodePtr a, NodePtr b, std::size_t off) {
    auto nd = std::make_shared<ExprNode>();
    nd->kind = Kind::Binary;
    nd->offset = off;
    nd->bin = op;
    nd->a = std::move(a);
    nd->b = std::move(b);
    return nd;
}

bool contains_identifier(const ExprNode* nd) {
    switch (nd->kind) {
        case Kind::Const: return false;
        case Kind::Unary: return contains_identifier(nd->a.get());
        case Kind::Binary:
            return contains_identifier(nd->a.get()) || contains_identifier(nd->b.get());
        default: return true;
    }
}

struct Parser {
    std::string_view text;
    int n;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool eat(char c) {
        if (peek_is(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    NodePtr parse_expression() {
        NodePtr lhs = parse_term();
        while (true) {
            skip_ws();
            const std::size_t off = pos;
            if (eat('+'))
                lhs = binary(BinOp::Add, lhs, parse_term(), off);
            else if (eat('-'))
                lhs = binary(BinOp::Sub, lhs, parse_term(), off);
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (true) {
            skip_ws();
            const std::size_t off = pos;
            if (eat('*'))
                lhs = binary(BinOp::Mul, lhs, parse_unary(), off);
            else if (eat('/'))
                lhs = binary(BinOp::Div, lhs, parse_unary(), off);
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        skip_ws();
        const std::size_t off = pos;
        if (eat('-')) return unary(UnOp::Neg, parse_unary(), off);
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        const std::size_t off = pos;
        if (!eat('^')) return base;
        NodePtr expo = parse_unary();  // right-associative; allows 2^-3
        if (contains_identifier(expo.get()))
            throw ParseError("exponent of '^' must be constant", expo->offset);
        return binary(BinOp::Pow, base, expo, off);
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= text.size())
            throw ParseError("unexpected end of input", pos);
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expression();
            if (!eat(')')) throw ParseError("expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    NodePtr parse_number() {
        const std::size_t start = pos;
        double value = 0.0;
        const auto res = std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (res.ec != std::errc())
            throw ParseError("malformed number", start);
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return constant(value, start);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        const std::string name(text.substr(start, pos - start));
        if (name == "u") return leaf(Kind::VarU, start);
        if (name == "r") return leaf(Kind::VarR, start);
        if (name == "q") return leaf(Kind::VarQ, start);
        if (auto axis = axis_of(name, 'x')) return axis_var(Kind::VarX, *axis, start);
        if (auto axis = axis_of(name, 'p')) return axis_var(Kind::VarP, *axis, start);
        if (auto fn = function_of(name)) {
            if (!eat('('))
                throw ParseError("expected '(' after '" + name + "'", pos);
            NodePtr arg = parse_expression();
            if (!eat(')')) throw ParseError("expected ')'", pos);
            return unary(*fn, std::move(arg), start);
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }

    // x<digits> / p<digits> with 1 <= index <= n, returned 0-based
    std::optional<int> axis_of(const std::string& name, char head) const {
        if (name.size() < 2 || name[0] != head) return std::nullopt;
        int axis = 0;
        const auto res =
            std::from_chars(name.data() + 1, name.data() + name.size(), axis);
        if (res.ec != std::errc() || res.ptr != name.data() + name.size())
            return std::nullopt;
        if (axis < 1 || axis > n) return std::nullopt;  // falls through to unknown-identifier
        return axis - 1;
    }

    static std::optional<UnOp> function_of(const std::string& name) {
        if (name == "exp") return UnOp::Exp;
        if (name == "log") return UnOp::Log;
        if (name == "sqrt") return UnOp::Sqrt;
        if (name == "sin") return UnOp::Sin;
        if (name == "cos") return UnOp::Cos;
        if (name == "abs") return UnOp::Abs;
        return std::nullopt;
    }
};

double finite_or_throw(double v, const char* what, std::size_t off) {
    if (!std::isfinite(v)) throw EvalDomainError(std::string(what), off);
    return v;
}

double eval_node(const ExprNode* nd, const EvalPoint& pt) {
    switch (nd->kind) {
        case Kind::Const: return nd->cval;
        case Kind::VarU: return pt.u;
        case Kind::VarX: return pt.x[nd->axis];
        case Kind::VarP: return pt.p[nd->axis];
        case Kind::VarR: return pt.x.norm();
        case Kind::VarQ: return pt.p.norm();
        case Kind::Unary: {
            const double a = eval_node(nd->a.get(), pt);
            switch (nd->un) {
                case UnOp::Neg: return -a;
                case UnOp::Exp:
                    return finite_or_throw(std::exp(a), "exp overflow", nd->offset);
                case UnOp::Log:
                    if (!(a > 0.0))
                        throw EvalDomainError("log of non-positive value", nd->offset);
                    return std::log(a);
                case UnOp::Sqrt:
                    if (a < 0.0)
                        throw EvalDomainError("sqrt of negative value", nd->offset);
                    return std::sqrt(a);
                case UnOp::Sin: return std::sin(a);
                case UnOp::Cos: return std::cos(a);
                case UnOp::Abs: return std::abs(a);
            }
            break;
        }
        case Kind::Binary: {
            const double a = eval_node(nd->a.get(), pt);
            const double b = eval_node(nd->b.get(), pt);
            switch (nd->bin) {
                case BinOp::Add:
                    return finite_or_throw(a + b, "non-finite sum", nd->offset);
                case BinOp::Sub:
                    return finite_or_throw(a - b, "non-finite difference", nd->offset);
                case BinOp::Mul:
                    return finite_or_throw(a * b, "non-finite product", nd->offset);
                case BinOp::Div:
                    if (b == 0.0)
                        throw EvalDomainError("division by zero", nd->offset);
                    return finite_or_throw(a / b, "non-finite quotient", nd->offset);
                case BinOp::Pow:
                    return finite_or_throw(std::pow(a, b),
                                           "power outside domain", nd->offset);
            }
            break;
        }
    }
    throw Error("eval: corrupt expression node");
}

// value + gradient in the layout [d_u, d_x(1..n), d_p(1..n)]
struct Dual {
    double v;
    Eigen::VectorXd g;
};

// Chain rule with a guard: a non-finite local factor is only an error when
// it multiplies a nonzero gradient (e.g. sqrt'(0) against a live direction).
Eigen::VectorXd chain(double factor, const Eigen::VectorXd& g, std::size_t off) {
    if (g.isZero(0.0)) return Eigen::VectorXd::Zero(g.size());
    if (!std::isfinite(factor))
        throw EvalDomainError("derivative is singular here", off);
    return factor * g;
}

Dual dual_node(const ExprNode* nd, const EvalPoint& pt) {
    const int n = static_cast<int>(pt.x.size());
    const int width = 1 + 2 * n;
    auto zero = [&] { return Eigen::VectorXd::Zero(width); };
    switch (nd->kind) {
        case Kind::Const: return {nd->cval, zero()};
        case Kind::VarU: {
            Eigen::VectorXd g = zero();
            g[0] = 1.0;
            return {pt.u, std::move(g)};
        }
        case Kind::VarX: {
            Eigen::VectorXd g = zero();
            g[1 + nd->axis] = 1.0;
            return {pt.x[nd->axis], std::move(g)};
        }
        case Kind::VarP: {
            Eigen::VectorXd g = zero();
            g[1 + n + nd->axis] = 1.0;
            return {pt.p[nd->axis], std::move(g)};
        }
        case Kind::VarR: {
            const double r = pt.x.norm();
            Eigen::VectorXd g = zero();
            if (r > 0.0)
                for (int i = 0; i < n; ++i) g[1 + i] = pt.x[i] / r;
            return {r, std::move(g)};
        }
        case Kind::VarQ: {
            const double q = pt.p.norm();
            Eigen::VectorXd g = zero();
            if (q > 0.0)
                for (int i = 0; i < n; ++i) g[1 + n + i] = pt.p[i] / q;
            return {q, std::move(g)};
        }
        case Kind::Unary: {
            Dual a = dual_node(nd->a.get(), pt);
            switch (nd->un) {
                case UnOp::Neg: return {-a.v, -a.g};
                case UnOp::Exp: {
                    const double w =
                        finite_or_throw(std::exp(a.v), "exp overflow", nd->offset);
                    return {w, chain(w, a.g, nd->offset)};
                }
                case UnOp::Log:
                    if (!(a.v > 0.0))
                        throw EvalDomainError("log of non-positive value", nd->offset);
                    return {std::log(a.v), chain(1.0 / a.v, a.g, nd->offset)};
                case UnOp::Sqrt: {
                    if (a.v < 0.0)
                        throw EvalDomainError("sqrt of negative value", nd->offset);
                    const double w = std::sqrt(a.v);
                    return {w, chain(w > 0.0 ? 0.5 / w
                                             : std::numeric_limits<double>::infinity(),
                                     a.g, nd->offset)};
                }
                case UnOp::Sin:
                    return {std::sin(a.v), chain(std::cos(a.v), a.g, nd->offset)};
                case UnOp::Cos:
                    return {std::cos(a.v), chain(-std::sin(a.v), a.g, nd->offset)};
                case UnOp::Abs: {
                    const double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
                    return {std::abs(a.v), chain(s, a.g, nd->offset)};
                }
            }
            break;
        }
        case Kind::Binary: {
            Dual a = dual_node(nd->a.get(), pt);
            Dual b = dual_node(nd->b.get(), pt);
            switch (nd->bin) {
                case BinOp::Add:
                    return {finite_or_throw(a.v + b.v, "non-finite sum", nd->offset),
                            a.g + b.g};
                case BinOp::Sub:
                    return {finite_or_throw(a.v - b.v, "non-finite difference",
                                            nd->offset),
                            a.g - b.g};
                case BinOp::Mul:
                    return {finite_or_throw(a.v * b.v, "non-finite product",
                                            nd->offset),
                            a.v * b.g + b.v * a.g};
                case BinOp::Div: {
                    if (b.v == 0.0)
                        throw EvalDomainError("division by zero", nd->offset);
                    const double w =
                        finite_or_throw(a.v / b.v, "non-finite quotient", nd->offset);
                    return {w, (a.g - w * b.g) / b.v};
                }
                case BinOp::Pow: {
                    const double c = b.v;  // exponent subtree is identifier-free
                    const double w = finite_or_throw(std::pow(a.v, c),
                                                     "power outside domain", nd->offset);
                    const double factor = c == 0.0 ? 0.0 : c * std::pow(a.v, c - 1.0);
                    return {w, chain(factor, a.g, nd->offset)};
                }
            }
            break;
        }
    }
    throw Error("eval_with_partials: corrupt expression node");
}

void pretty_node(const ExprNode* nd, std::string& out) {
    switch (nd->kind) {
        case Kind::Const: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", nd->cval);
            out += buf;
            return;
        }
        case Kind::VarU: out += 'u'; return;
        case Kind::VarR: out += 'r'; return;
        case Kind::VarQ: out += 'q'; return;
        case Kind::VarX: out += 'x' + std::to_string(nd->axis + 1); return;
        case Kind::VarP: out += 'p' + std::to_string(nd->axis + 1); return;
        case Kind::Unary: {
            static const char* names[] = {"-", "exp", "log", "sqrt", "sin", "cos", "abs"};
            out += names[static_cast<int>(nd->un)];
            out += '(';
            pretty_node(nd->a.get(), out);
            out += ')';
            return;
        }
        case Kind::Binary: {
            static const char* ops[] = {" + ", " - ", " * ", " / ", " ^ "};
            out += '(';
            pretty_node(nd->a.get(), out);
            out += ops[static_cast<int>(nd->bin)];
            pretty_node(nd->b.get(), out);
            out += ')';
            return;
        }
    }
}

bool nodes_equal(const ExprNode* a, const ExprNode* b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Const: return a->cval == b->cval;
        case Kind::VarX:
        case Kind::VarP: return a->axis == b->axis;
        case Kind::Unary:
            return a->un == b->un && nodes_equal(a->a.get(), b->a.get());
        case Kind::Binary:
            return a->bin == b->bin && nodes_equal(a->a.get(), b->a.get()) &&
                   nodes_equal(a->b.get(), b->b.get());
        default: return true;
    }
}

template <typename Pred>
bool any_node(const ExprNode* nd, Pred pred) {
    if (pred(nd)) return true;
    if (nd->a && any_node(nd->a.get(), pred)) return true;
    if (nd->b && any_node(nd->b.get(), pred)) return true;
    return false;
}

void check_point(const EvalPoint& pt, int n) {
    if (pt.x.size() != n || pt.p.size() != n)
        throw InvalidInputError("EvalPoint: x and p must have the parse dimension");
    if (!pt.x.allFinite() || !pt.p.allFinite() || !std::isfinite(pt.u))
        throw InvalidInputError("EvalPoint: non-finite entry");
}

}  // namespace

ExprAst::ExprAst(std::shared_ptr<const ExprNode> root, int n)
    : root_(std::move(root)), n_(n) {}

ExprAst ExprAst::parse(std::string_view text, int n) {
    if (n < 1) throw InvalidInputError("parse: dimension must be >= 1");
    Parser parser{text, n};
    NodePtr root = parser.parse_expression();
    parser.skip_ws();
    if (parser.pos != text.size())
        throw ParseError("unexpected trailing input", parser.pos);
    return {std::move(root), n};
}

double ExprAst::eval(const EvalPoint& pt) const {
    check_point(pt, n_);
    return eval_node(root_.get(), pt);
}

Partials ExprAst::eval_with_partials(const EvalPoint& pt) const {
    check_point(pt, n_);
    const Dual d = dual_node(root_.get(), pt);
    Partials out;
    out.value = d.v;
    out.d_u = d.g[0];
    out.d_x = d.g.segment(1, n_);
    out.d_p = d.g.segment(1 + n_, n_);
    return out;
}

std::string ExprAst::pretty() const {
    std::string out;
    pretty_node(root_.get(), out);
    return out;
}

bool ExprAst::references_gradient() const {
    return any_node(root_.get(), [](const ExprNode* nd) {
        return nd->kind == Kind::VarP || nd->kind == Kind::VarQ;
    });
}

bool ExprAst::radial_only() const {
    return !any_node(root_.get(), [](const ExprNode* nd) {
        return nd->kind == Kind::VarX || nd->kind == Kind::VarP;
    });
}

bool ExprAst::structurally_equal(const ExprAst& other) const {
    return n_ == other.n_ && nodes_equal(root_.get(), other.root_.get());
}

ExprAst ExprAst::to_power(double exponent) const {
    return {binary(BinOp::Pow, root_, constant(exponent, 0), 0), n_};
}

}  // namespace hq
