#include "hq/types.hpp"

#include <cmath>
#include <utility>

namespace hq {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

EigenTuple::EigenTuple(Eigen::VectorXd values) : v_(std::move(values)) {
    if (v_.size() == 0)
        throw InvalidInputError("EigenTuple: empty tuple");
    if (!v_.allFinite())
        throw InvalidInputError("EigenTuple: non-finite entry");
}

EigenTuple::EigenTuple(std::initializer_list<double> values)
    : EigenTuple(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
          values.begin(), static_cast<Eigen::Index>(values.size())))) {}

SymMatrix::SymMatrix(int dim) : n_(dim) {
    if (dim < 1) throw InvalidInputError("SymMatrix: dimension must be >= 1");
    a_.assign(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0);
}

int SymMatrix::pack(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InvalidInputError("SymMatrix: index out of range");
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
}

void SymMatrix::set(int i, int j, double v) {
    if (!std::isfinite(v))
        throw InvalidInputError("SymMatrix: non-finite entry");
    a_[pack(i, j)] = v;
}

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < d.size(); ++i) m.set(static_cast<int>(i), static_cast<int>(i), d[i]);
    return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw InvalidInputError("SymMatrix: matrix must be square");
    if (!m.allFinite())
        throw InvalidInputError("SymMatrix: non-finite entry");
    const double scale = m.cwiseAbs().maxCoeff();
    SymMatrix out(static_cast<int>(m.rows()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j <= i; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol * std::max(1.0, scale))
                throw InvalidInputError("SymMatrix: matrix is not symmetric");
            out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
    return out;
}

Eigen::MatrixXd SymMatrix::to_dense() const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = (*this)(i, j);
    return m;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::max_abs() const {
    double t = 0.0;
    for (double v : a_) t = std::max(t, std::abs(v));
    return t;
}

}  // namespace hq
