#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>

#include "hq/compound.hpp"
#include "hq/exprlang.hpp"

namespace hq {

struct BoxDomain {
    Eigen::VectorXd lo, hi;
};

struct BallDomain {
    Eigen::VectorXd center;
    double radius;
};

/// Constants quoted by the structural hypotheses; optional, consumed only by
/// the verification harness.
struct StructuralConstants {
    std::optional<double> c0;     // lower bound for -phi_u
    std::optional<double> alpha0; // lower bound for -d/du (1/psi_tilde)
    std::optional<double> gamma;  // gradient growth exponent, < 1
    std::optional<double> C1;     // gradient growth constant
    std::optional<double> M1;     // gradient magnitude threshold
};

/// Full problem statement. psi_tilde is the normalized right-hand side
/// (the 1/(k-l) root of the raw quotient datum); phi is the Neumann datum
/// and may reference u but never the gradient.
struct ProblemSpec {
    OperatorSignature sig;
    std::variant<BoxDomain, BallDomain> domain;
    ExprAst psi_tilde;
    ExprAst phi;
    StructuralConstants structural;
};

/// Axis-aligned bounding box of the domain (circumscribed box for balls).
void domain_bounds(const ProblemSpec& prob, Eigen::VectorXd& lo, Eigen::VectorXd& hi);

[[nodiscard]] Eigen::VectorXd domain_center(const ProblemSpec& prob);

/// Load-time validation: domain extents are sane with the signature's
/// dimension, phi is gradient-free, and psi_tilde evaluates strictly
/// positive on quasi-random (x, u=0, p=0) samples over the domain box.
/// Throws ConfigError on violation.
void validate_problem(const ProblemSpec& prob);

}  // namespace hq
