#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hq/grid.hpp"
#include "hq/problem.hpp"

namespace hq {

/// Right-hand side sample: value and the derivatives the Jacobian needs.
struct PsiEval {
    double value = 0.0;
    double d_u = 0.0;
    Eigen::VectorXd d_p;
};

/// Neumann datum sample. The outward normal is passed in so manufactured
/// problems can prescribe exact normal derivatives; expression-based data
/// ignore it.
struct PhiEval {
    double value = 0.0;
    double d_u = 0.0;
};

using PsiFn =
    std::function<PsiEval(const Eigen::VectorXd& x, double u, const Eigen::VectorXd& p)>;
using PhiFn =
    std::function<PhiEval(const Eigen::VectorXd& x, double u, const Eigen::VectorXd& nu)>;

[[nodiscard]] PsiFn psi_from_ast(const ExprAst& ast);
[[nodiscard]] PhiFn phi_from_ast(const ExprAst& ast);

struct NewtonOptions {
    double tol_r = 1e-9;    // interior residual tolerance, times problem scale
    double tol_b = 1e-9;    // boundary residual tolerance, absolute
    double margin = 1e-10;  // admissibility margin kept by every accepted iterate
    int max_iter = 50;
    double min_step = 9.5367431640625e-7;  // 2^-20
    double A0 = 1.0;        // curvature of the continuation start paraboloid
    double t_step0 = 0.25;
    double t_step_floor = 1e-3;
};

struct ContinuationStep {
    double t;
    int newton_iterations;
};

struct SolveReport {
    bool converged = false;
    std::string failure;  // empty iff converged
    int iterations = 0;   // accepted Newton steps over all continuation stages
    double residual_interior = 0.0;
    double residual_boundary = 0.0;
    double admissibility_margin = 0.0;  // min over nodes at the final iterate
    std::vector<ContinuationStep> continuation;
    double sup_u = 0.0;
    double osc_u = 0.0;
    double sup_grad = 0.0;
    double sup_hess = 0.0;  // max spectral norm over nodes
    double seconds = 0.0;   // wall clock; never serialized (reports stay deterministic)
};

/// Square nonlinear system with separately measured interior (PDE) and
/// boundary (Neumann) rows. Implementations are pure over the iterate.
class DiscreteSystem {
public:
    virtual ~DiscreteSystem() = default;

    [[nodiscard]] virtual long size() const = 0;
    [[nodiscard]] virtual Eigen::VectorXd residual(const Eigen::VectorXd& u) const = 0;
    [[nodiscard]] virtual Eigen::SparseMatrix<double> jacobian(
        const Eigen::VectorXd& u) const = 0;

    /// Min admissibility margin over nodes; -infinity allowed for broken states.
    [[nodiscard]] virtual double margin(const Eigen::VectorXd& u) const = 0;

    /// 1 + max |psi| over interior nodes; scales the interior tolerance.
    [[nodiscard]] virtual double interior_scale(const Eigen::VectorXd& u) const = 0;

    virtual void residual_norms(const Eigen::VectorXd& r, double& interior,
                                double& boundary) const = 0;
};

struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    double residual_interior = 0.0;
    double residual_boundary = 0.0;
    std::string failure;
};

/// Damped Newton with backtracking: a step is accepted only if the trial
/// iterate keeps margin >= opts.margin at every node and strictly decreases
/// the residual max-norm. Sparse LU with a fixed ordering keeps runs
/// deterministic; the inner solve must reach 1e-10 relative residual.
[[nodiscard]] NewtonOutcome newton_damped(const DiscreteSystem& sys,
                                          Eigen::VectorXd& u,
                                          const NewtonOptions& opts);

/// Box discretization of the Neumann problem: interior rows
/// F(hessian) - psi(x, u, gradient), boundary rows u_nu - phi(x, u).
class BoxSystem : public DiscreteSystem {
public:
    BoxSystem(std::shared_ptr<const RectGrid> grid, OperatorSignature sig,
              PsiFn psi, PhiFn phi);

    [[nodiscard]] long size() const override;
    [[nodiscard]] Eigen::VectorXd residual(const Eigen::VectorXd& u) const override;
    [[nodiscard]] Eigen::SparseMatrix<double> jacobian(
        const Eigen::VectorXd& u) const override;
    [[nodiscard]] double margin(const Eigen::VectorXd& u) const override;
    [[nodiscard]] double interior_scale(const Eigen::VectorXd& u) const override;
    void residual_norms(const Eigen::VectorXd& r, double& interior,
                        double& boundary) const override;

    [[nodiscard]] const std::shared_ptr<const RectGrid>& grid() const { return grid_; }
    [[nodiscard]] const OperatorSignature& sig() const { return sig_; }

private:
    struct NodeInfo {
        std::vector<int> idx;
        Eigen::VectorXd x;
        bool boundary = false;
        Eigen::VectorXd normal;  // unit outward, boundary nodes only
    };

    std::shared_ptr<const RectGrid> grid_;
    OperatorSignature sig_;
    PsiFn psi_;
    PhiFn phi_;
    std::vector<NodeInfo> nodes_;
};

/// PDE residual of a field under a problem statement; one value per node.
[[nodiscard]] Field residual(const Field& field, const ProblemSpec& prob);

/// Sparse Jacobian of the residual at the field.
[[nodiscard]] Eigen::SparseMatrix<double> jacobian(const Field& field,
                                                   const ProblemSpec& prob);

/// Newton solve from a caller-supplied admissible initial field (box domain).
[[nodiscard]] std::pair<Field, SolveReport> newton_solve(
    const ProblemSpec& prob, const Field& init, const NewtonOptions& opts = {});

/// Homotopy solve on a box: starts from the paraboloid (A0/2)|x - center|^2,
/// whose right-hand side is an exactly known positive constant, and marches
/// the blended problem from t = 0 to t = 1 with adaptive steps and warm
/// starts. Generic function-based form.
[[nodiscard]] std::pair<Field, SolveReport> continuation_solve_fn(
    std::shared_ptr<const RectGrid> grid, const OperatorSignature& sig,
    const PsiFn& psi, const PhiFn& phi, const NewtonOptions& opts = {});

/// Expression-based continuation solve; dims gives nodes per axis.
[[nodiscard]] std::pair<Field, SolveReport> continuation_solve(
    const ProblemSpec& prob, const std::vector<int>& dims,
    const NewtonOptions& opts = {});

/// Extrema of a solved field (sup |u|, osc, sup |Du|, sup |D^2u| spectral)
/// plus the admissibility margin, written into the report.
void fill_field_stats(const Field& field, const OperatorSignature& sig,
                      SolveReport& report);

}  // namespace hq
