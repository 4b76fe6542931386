#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hq/types.hpp"

namespace hq {

/// Lexicographically ordered family of the p-element subsets of {0,..,n-1}.
/// Ranks are stable across the codebase: rank_of(set(r)) == r.
class IndexFamily {
public:
    IndexFamily(int n, int p);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int p() const { return p_; }
    [[nodiscard]] int count() const { return static_cast<int>(sets_.size()); }
    [[nodiscard]] const std::vector<int>& set(int rank) const;
    [[nodiscard]] int rank_of(const std::vector<int>& s) const;
    [[nodiscard]] const std::vector<std::vector<int>>& sets() const { return sets_; }

private:
    int n_, p_;
    std::vector<std::vector<int>> sets_;
};

/// Enumerates the subset family; requires 1 <= p <= n-1.
[[nodiscard]] IndexFamily index_sets(int n, int p);

/// Parameters of the eigenvalue-sum quotient operator
/// F(A) = [sigma_k / sigma_l]^(1/(k-l)) evaluated on the p-fold eigenvalue
/// sums of an n x n Hessian.
struct OperatorSignature {
    OperatorSignature(int n, int p, int k, int l);

    int n, p, k, l;

    /// Number of p-subsets, C(n,p); the length of the sum tuple.
    [[nodiscard]] int N() const { return N_; }

    /// True iff k <= C(n-1, p-1), the regime in which the per-direction
    /// lower bound on the operator gradient is available.
    [[nodiscard]] bool theorem_regime() const { return regime_; }

private:
    int N_;
    bool regime_;
};

/// p-th additive compound of a symmetric matrix: the N x N symmetric matrix
/// whose spectrum is the p-fold sums of the spectrum of A. p = dim(A) gives
/// the 1 x 1 trace.
[[nodiscard]] SymMatrix additive_compound(const SymMatrix& a, int p);

/// Sorted (descending) p-fold eigenvalue sums of A, computed as the spectrum
/// of the additive compound.
[[nodiscard]] EigenTuple lambda_of(const SymMatrix& a, int p);

/// (Lambda,k)-convexity: the sum tuple lies strictly in Gamma_k. Decided
/// eigendecomposition-free from the signs of sigma_1..sigma_k of the
/// compound matrix.
[[nodiscard]] bool is_admissible(const SymMatrix& a, const OperatorSignature& sig);

/// Scale-aware distance to inadmissibility:
/// min over 1 <= j <= k of sigma_j(Lambda) / (C(N,j) * (1 + max|A|)^j).
/// Positive iff admissible; used as the line-search guard in the solver.
[[nodiscard]] double admissibility_margin(const SymMatrix& a,
                                          const OperatorSignature& sig);

/// F(A) = [sigma_k(Lambda)/sigma_l(Lambda)]^(1/(k-l)), computed from Newton
/// transforms of the compound matrix; no eigendecomposition.
[[nodiscard]] double F_value(const SymMatrix& a, const OperatorSignature& sig);

/// Matrix derivative F^{ij} = dF/dA_ij, pulled back through the compound
/// structure constants. Symmetric positive definite on admissible input.
[[nodiscard]] SymMatrix F_gradient(const SymMatrix& a, const OperatorSignature& sig);

/// Lower bound p * (C(N,k)/C(N,l))^(1/(k-l)) for the trace of F_gradient;
/// also the exact value of F at the identity Hessian.
[[nodiscard]] double regime_constants(const OperatorSignature& sig);

}  // namespace hq
