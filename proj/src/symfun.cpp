#include "hq/symfun.hpp"

#include <algorithm>
#include <cmath>

namespace hq {

namespace {

// Prefix recurrence e_j <- e_j + lam_i * e_{j-1}, updated high to low so each
// entry is used before it is overwritten. `skip` removes one entry (-1: none).
double esf(const Eigen::VectorXd& lam, int k, int skip = -1) {
    const int m = static_cast<int>(lam.size());
    if (k == 0) return 1.0;
    if (k < 0 || k > m - (skip >= 0 ? 1 : 0)) return 0.0;
    std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
    e[0] = 1.0;
    int seen = 0;
    for (int i = 0; i < m; ++i) {
        if (i == skip) continue;
        ++seen;
        for (int j = std::min(seen, k); j >= 1; --j) e[j] += lam[i] * e[j - 1];
    }
    return e[static_cast<std::size_t>(k)];
}

}  // namespace

double sigma_k(const EigenTuple& lam, int k) { return esf(lam.values(), k); }

double sigma_partial(const EigenTuple& lam, int k, int i) {
    if (i < 0 || i >= lam.size())
        throw InvalidInputError("sigma_partial: entry index out of range");
    return esf(lam.values(), k - 1, i);
}

bool in_gamma_k(const EigenTuple& lam, int k) {
    if (k < 1 || k > lam.size())
        throw InvalidInputError("in_gamma_k: require 1 <= k <= size(lam)");
    for (int j = 1; j <= k; ++j)
        if (!(sigma_k(lam, j) > 0.0)) return false;
    return true;
}

namespace {

void check_quotient_degrees(const EigenTuple& lam, int k, int l) {
    if (!(0 <= l && l < k && k <= lam.size()))
        throw InvalidInputError("quotient degrees: require 0 <= l < k <= size(lam)");
    if (!in_gamma_k(lam, k))
        throw AdmissibilityError("quotient: tuple is outside Gamma_k");
}

}  // namespace

double quotient_f(const EigenTuple& lam, int k, int l) {
    check_quotient_degrees(lam, k, l);
    const double sk = sigma_k(lam, k);
    const double sl = sigma_k(lam, l);
    return std::pow(sk / sl, 1.0 / (k - l));
}

Eigen::VectorXd quotient_grad(const EigenTuple& lam, int k, int l) {
    check_quotient_degrees(lam, k, l);
    const double sk = sigma_k(lam, k);
    const double sl = sigma_k(lam, l);
    const double f = std::pow(sk / sl, 1.0 / (k - l));
    Eigen::VectorXd g(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        const double dk = sigma_partial(lam, k, i);
        const double dl = sigma_partial(lam, l, i);
        g[i] = f / (k - l) * (dk / sk - dl / sl);
    }
    return g;
}

namespace {

// Shared driver: T_0 = I, sigma_j = tr(T_{j-1} M) / j,
// T_j = sigma_j I - sym(T_{j-1} M). Returns sigma_0..sigma_kmax and leaves
// T_kmax in `t`.
std::vector<double> newton_chain(const SymMatrix& m, int kmax, Eigen::MatrixXd& t) {
    const int n = m.dim();
    if (kmax < 0 || kmax > n)
        throw InvalidInputError("newton chain: require 0 <= k <= dim");
    const Eigen::MatrixXd md = m.to_dense();
    t = Eigen::MatrixXd::Identity(n, n);
    std::vector<double> sig{1.0};
    for (int j = 1; j <= kmax; ++j) {
        const Eigen::MatrixXd p = t * md;
        const double sj = p.trace() / j;
        sig.push_back(sj);
        t = sj * Eigen::MatrixXd::Identity(n, n) - 0.5 * (p + p.transpose());
    }
    return sig;
}

}  // namespace

SymMatrix newton_transform(const SymMatrix& m, int k) {
    Eigen::MatrixXd t;
    newton_chain(m, k, t);
    return SymMatrix::from_dense(t);
}

std::vector<double> sigma_prefix_of_matrix(const SymMatrix& m, int kmax) {
    Eigen::MatrixXd t;
    return newton_chain(m, kmax, t);
}

double sigma_k_of_matrix(const SymMatrix& m, int k) {
    if (k < 0 || k > m.dim()) return k == 0 ? 1.0 : 0.0;
    Eigen::MatrixXd t;
    return newton_chain(m, k, t).back();
}

}  // namespace hq
