#include "hq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace hq {

namespace {

double offdiag_norm(const Eigen::MatrixXd& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigen_sym(const SymMatrix& m, double tol) {
    if (!(tol > 0.0)) throw InvalidInputError("eigen_sym: tolerance must be positive");
    const int n = m.dim();
    Eigen::MatrixXd a = m.to_dense();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = a.norm();  // fixed reference: Frobenius norm of input
    const int max_sweeps = 50;

    int sweeps = 0;
    while (scale > 0.0 && offdiag_norm(a) > tol * scale) {
        if (++sweeps > max_sweeps)
            throw NumericalError(
                "eigen_sym: no convergence after " + std::to_string(max_sweeps) +
                " sweeps; off-diagonal residual " + std::to_string(offdiag_norm(a)));
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle from the stable tangent formula.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int r = 0; r < n; ++r) {
        out.values[r] = a(order[r], order[r]);
        out.vectors.row(r) = v.col(order[r]).transpose();
    }
    return out;
}

}  // namespace hq
