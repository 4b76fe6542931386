#pragma once

#include "hq/solver.hpp"

namespace hq {

/// Per-node radial derivative samples of a 1-D profile on [0, R]: second
/// derivative, w = u'/r with the center value continued as u''(0), and u'.
struct RadialDerivatives {
    Eigen::VectorXd upp, w, up;
};

[[nodiscard]] RadialDerivatives radial_derivatives(const Field& profile);

/// Eigenvalue-sum multiset of a radial Hessian: u'' + (p-1)w with
/// multiplicity C(n-1,p-1), and p*w with multiplicity C(n-1,p). The
/// multiplicities summing to C(n,p) is asserted.
[[nodiscard]] EigenTuple radial_lambda(double upp, double w,
                                       const OperatorSignature& sig);

/// Radial reduction of the box system on a ball: node 0 carries the symmetry
/// condition u'(0) = 0, node m-1 the Neumann condition, interior nodes the
/// quotient equation on the radial eigenvalue sums.
class RadialSystem : public DiscreteSystem {
public:
    RadialSystem(std::shared_ptr<const RectGrid> grid, OperatorSignature sig,
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

    /// Embeds a radius and signed radial gradient into full-dimension
    /// arguments along the first axis.
    [[nodiscard]] Eigen::VectorXd embed(double value) const;

private:
    std::shared_ptr<const RectGrid> grid_;  // 1-D grid on [0, R]
    OperatorSignature sig_;
    PsiFn psi_;
    PhiFn phi_;
    int mult_a_, mult_b_;
};

/// Field statistics of a radial profile under the radial Hessian formulas.
void fill_radial_stats(const Field& profile, const OperatorSignature& sig,
                       SolveReport& report);

/// Homotopy solve of a ball problem reduced to the radial profile; m is the
/// 1-D node count. Requires an origin-centered ball and data depending only
/// on r, u and q.
[[nodiscard]] std::pair<Field, SolveReport> radial_solve(
    const ProblemSpec& prob, int m, const NewtonOptions& opts = {});

}  // namespace hq
