#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hq/types.hpp"

namespace hq {

/// Elementary symmetric function sigma_k(lam). sigma_0 = 1; sigma_k = 0 for
/// k < 0 or k > size(lam).
[[nodiscard]] double sigma_k(const EigenTuple& lam, int k);

/// sigma_{k-1}(lam | i): elementary symmetric function of degree k-1 of the
/// tuple with entry i removed (0-based). Equals d sigma_k / d lam_i.
[[nodiscard]] double sigma_partial(const EigenTuple& lam, int k, int i);

/// Strict membership in the Garding cone Gamma_k:
/// sigma_j(lam) > 0 for every 1 <= j <= k. No tolerance.
[[nodiscard]] bool in_gamma_k(const EigenTuple& lam, int k);

/// Normalized Hessian quotient f(lam) = (sigma_k / sigma_l)^(1/(k-l)),
/// positively homogeneous of degree one. Requires 0 <= l < k <= size(lam)
/// and lam in Gamma_k.
[[nodiscard]] double quotient_f(const EigenTuple& lam, int k, int l);

/// Gradient of quotient_f with respect to each lam_i. All components are
/// strictly positive on Gamma_k (degenerate ellipticity never occurs there).
[[nodiscard]] Eigen::VectorXd quotient_grad(const EigenTuple& lam, int k, int l);

/// Newton transform T_k(M) of a symmetric matrix, defined by T_0 = I and
/// T_k = sigma_k(lam(M)) I - (1/2)(T_{k-1} M + M T_{k-1}). Its entries are
/// the derivatives of sigma_{k+1}(lam(M)) with respect to the matrix entries.
[[nodiscard]] SymMatrix newton_transform(const SymMatrix& m, int k);

/// sigma_j(lam(M)) for j = 0..kmax, computed from traces of Newton
/// transforms; no eigendecomposition is performed.
[[nodiscard]] std::vector<double> sigma_prefix_of_matrix(const SymMatrix& m, int kmax);

/// sigma_k of the eigenvalues of a symmetric matrix, eigendecomposition-free.
[[nodiscard]] double sigma_k_of_matrix(const SymMatrix& m, int k);

}  // namespace hq
