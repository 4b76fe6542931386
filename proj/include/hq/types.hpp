#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

#include "hq/errors.hpp"

namespace hq {

/// Exact binomial coefficient C(n, k) as a double; 0 outside 0 <= k <= n.
[[nodiscard]] double binomial(int n, int k);

/// Ordered tuple of real values (eigenvalues or p-fold eigenvalue sums).
/// Entries are validated finite on construction.
class EigenTuple {
public:
    explicit EigenTuple(Eigen::VectorXd values);
    EigenTuple(std::initializer_list<double> values);

    [[nodiscard]] int size() const { return static_cast<int>(v_.size()); }
    [[nodiscard]] double operator[](int i) const { return v_[i]; }
    [[nodiscard]] const Eigen::VectorXd& values() const { return v_; }

private:
    Eigen::VectorXd v_;
};

/// Dense real symmetric matrix with value semantics. Only one triangle is
/// stored, so (i,j) and (j,i) can never disagree.
class SymMatrix {
public:
    /// Zero matrix of the given dimension (dim >= 1).
    explicit SymMatrix(int dim);

    [[nodiscard]] static SymMatrix identity(int dim);
    [[nodiscard]] static SymMatrix diagonal(const Eigen::VectorXd& d);

    /// Accepts a matrix that is symmetric up to rounding; the two triangles
    /// are averaged. Asymmetry beyond `tol * max|entry|` is an error.
    [[nodiscard]] static SymMatrix from_dense(const Eigen::MatrixXd& m,
                                              double tol = 1e-12);

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] double operator()(int i, int j) const {
        return a_[pack(i, j)];
    }
    void set(int i, int j, double v);

    [[nodiscard]] Eigen::MatrixXd to_dense() const;
    [[nodiscard]] double trace() const;
    [[nodiscard]] double max_abs() const;

private:
    [[nodiscard]] int pack(int i, int j) const;

    int n_;
    std::vector<double> a_;  // lower triangle, row-major
};

}  // namespace hq
