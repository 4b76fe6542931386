#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>

#include "hq/errors.hpp"

namespace hq {

/// Point at which expressions are evaluated: coordinates x, scalar u and
/// gradient argument p, with x and p of the dimension fixed at parse time.
struct EvalPoint {
    Eigen::VectorXd x;
    double u = 0.0;
    Eigen::VectorXd p;
};

/// Value plus exact first derivatives with respect to u, p and x.
struct Partials {
    double value = 0.0;
    double d_u = 0.0;
    Eigen::VectorXd d_p;
    Eigen::VectorXd d_x;
};

namespace detail {
struct ExprNode;
}

/// Immutable arithmetic expression over the identifiers
/// x1..xn, u, p1..pn, r (= |x|) and q (= |p|), with unary
/// neg/exp/log/sqrt/sin/cos/abs and binary + - * / ^ (constant exponent).
class ExprAst {
public:
    /// Parses with precedence ^ > unary - > * / > + -, left-associative
    /// binaries, right-associative ^. Errors carry a byte offset.
    [[nodiscard]] static ExprAst parse(std::string_view text, int n);

    [[nodiscard]] double eval(const EvalPoint& pt) const;

    /// Forward-mode dual evaluation; derivatives are exact to rounding on
    /// smooth nodes. abs'(0) = 0, and |p| (resp. |x|) gets zero derivative
    /// at the origin.
    [[nodiscard]] Partials eval_with_partials(const EvalPoint& pt) const;

    /// Fully parenthesized form; reparsing it reproduces the structure.
    [[nodiscard]] std::string pretty() const;

    [[nodiscard]] int dimension() const { return n_; }

    /// True if any of p1..pn or q appears.
    [[nodiscard]] bool references_gradient() const;

    /// True if only r, q and u appear (no bare coordinate or gradient
    /// component), so the expression is usable in radial form.
    [[nodiscard]] bool radial_only() const;

    [[nodiscard]] bool structurally_equal(const ExprAst& other) const;

    /// The expression raised to a constant power (value^exponent); used to
    /// rewrite a right-hand side psi as psi^(1/(k-l)).
    [[nodiscard]] ExprAst to_power(double exponent) const;

private:
    ExprAst(std::shared_ptr<const detail::ExprNode> root, int n);

    std::shared_ptr<const detail::ExprNode> root_;
    int n_;
};

}  // namespace hq
