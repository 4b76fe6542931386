#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hq/problem.hpp"
#include "hq/solver.hpp"

namespace hq {

/// Quasi-random sampling plan shared by the hypothesis checks.
struct SamplerConfig {
    int samples = 10000;
    double u_range = 1.0;  // u drawn from [-u_range, u_range]
    double p_max = 1e3;    // largest gradient magnitude for the growth check
    std::uint64_t seed = 0;
};

/// Sampled check of the sign hypotheses on phi and psi_tilde:
/// -phi_u bounded below by c0 and -d/du(1/psi_tilde) bounded below by alpha0.
struct StructuralReport {
    double c0_measured = 0.0;
    double alpha0_measured = 0.0;
    bool c0_ok = false;
    bool alpha0_ok = false;
    Eigen::VectorXd c0_argmin_x;
    double c0_argmin_u = 0.0;
    Eigen::VectorXd alpha0_argmin_x;
    double alpha0_argmin_u = 0.0;
    std::string sample_description;
};

/// Sampled check of the gradient growth hypothesis
/// |psi_x| + |psi_u||p| + |psi_p||p|^2 <= C1 |p|^(2+gamma) for |p| > M1.
struct GrowthReport {
    double gamma = 0.0;
    double C1 = 0.0;
    double M1 = 0.0;
    double measured_sup = 0.0;
    bool ok = false;
    std::string sample_description;
};

/// Post-solve facts about one converged run: solution extrema, the interior
/// gradient bound ratio, and the boundary comparison bound.
struct BoundReport {
    double osc_u = 0.0;
    double sup_grad = 0.0;
    double sup_hess = 0.0;
    double interior_grad_at_center = 0.0;
    /// |Du(center)| over osc/r + osc^(2/(1-gamma)) + osc^(1/(1-gamma)),
    /// with osc taken over the inscribed ball. Bounded sequences of this
    /// ratio across refinements stand in for the non-computable constant.
    double ratio = 0.0;
    bool c0_bound_applicable = false;
    bool c0_bound_ok = false;
    double c0_bound_lhs = 0.0;  // max u over all nodes
    double c0_bound_rhs = 0.0;  // max over boundary of phi(.,0)/c0, plus slack
};

[[nodiscard]] StructuralReport check_structural(const ProblemSpec& prob,
                                                const SamplerConfig& sampler = {});

/// Requires gamma, C1 and M1 present (gamma < 1, M1 > 0); samples gradient
/// magnitudes log-uniformly in (M1, p_max].
[[nodiscard]] GrowthReport check_growth(const ProblemSpec& prob,
                                        const SamplerConfig& sampler = {});

/// Inputs for verification when the Neumann datum is a callback rather than
/// an expression (manufactured problems prescribe exact normal derivatives).
struct VerifyInputs {
    OperatorSignature sig;
    std::variant<BoxDomain, BallDomain> domain;
    PhiFn phi;
    std::optional<double> c0;
    double gamma = 0.0;
};

[[nodiscard]] BoundReport verify_solution_core(const VerifyInputs& in,
                                               const Field& field,
                                               const SolveReport& report);

/// Expression-based wrapper; rejects non-converged reports.
[[nodiscard]] BoundReport verify_solution(const ProblemSpec& prob, const Field& field,
                                          const SolveReport& report);

/// Refinement-ratio stability: every later ratio at most 20% above its
/// predecessor (tiny absolute slack for ratios near zero).
[[nodiscard]] bool ratios_stable(const std::vector<double>& ratios);

}  // namespace hq
