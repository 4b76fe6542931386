#pragma once

#include <Eigen/Dense>

#include "hq/types.hpp"

namespace hq {

/// Eigendecomposition of a symmetric matrix. Row r of `vectors` is the unit
/// eigenvector paired with `values[r]`; values are sorted descending.
struct EigenDecomposition {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Cyclic Jacobi eigensolver. Deterministic row-major sweeps over the upper
/// triangle; converged when the off-diagonal Frobenius norm falls below
/// tol * ||M||_F (norm of the input matrix). More than 50 sweeps is an error.
[[nodiscard]] EigenDecomposition eigen_sym(const SymMatrix& m, double tol = 1e-13);

}  // namespace hq
