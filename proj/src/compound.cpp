#include "hq/compound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "hq/spectral.hpp"
#include "hq/symfun.hpp"

namespace hq {

IndexFamily::IndexFamily(int n, int p) : n_(n), p_(p) {
    if (n < 1 || p < 1 || p > n)
        throw InvalidInputError("IndexFamily: require 1 <= p <= n");
    std::vector<int> cur(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) cur[i] = i;
    while (true) {
        sets_.push_back(cur);
        // advance to the lexicographic successor
        int a = p - 1;
        while (a >= 0 && cur[a] == n - p + a) --a;
        if (a < 0) break;
        ++cur[a];
        for (int b = a + 1; b < p; ++b) cur[b] = cur[b - 1] + 1;
    }
}

const std::vector<int>& IndexFamily::set(int rank) const {
    if (rank < 0 || rank >= count())
        throw InvalidInputError("IndexFamily: rank out of range");
    return sets_[static_cast<std::size_t>(rank)];
}

int IndexFamily::rank_of(const std::vector<int>& s) const {
    if (static_cast<int>(s.size()) != p_)
        throw InvalidInputError("IndexFamily: subset has wrong size");
    // Count the lexicographic predecessors combinatorially.
    double rank = 0.0;
    int prev = -1;
    for (int t = 0; t < p_; ++t) {
        const int st = s[static_cast<std::size_t>(t)];
        if (st <= prev || st >= n_)
            throw InvalidInputError("IndexFamily: subset is not strictly increasing in range");
        for (int v = prev + 1; v < st; ++v)
            rank += binomial(n_ - 1 - v, p_ - 1 - t);
        prev = st;
    }
    return static_cast<int>(rank);
}

IndexFamily index_sets(int n, int p) {
    if (p < 1 || p > n - 1)
        throw InvalidInputError("index_sets: require 1 <= p <= n-1");
    return {n, p};
}

OperatorSignature::OperatorSignature(int n_in, int p_in, int k_in, int l_in)
    : n(n_in), p(p_in), k(k_in), l(l_in) {
    if (n < 2) throw InvalidInputError("OperatorSignature: require n >= 2");
    if (p < 1 || p > n - 1)
        throw InvalidInputError("OperatorSignature: require 1 <= p <= n-1");
    N_ = static_cast<int>(binomial(n, p));
    if (!(0 <= l && l < k && k <= N_))
        throw InvalidInputError("OperatorSignature: require 0 <= l < k <= C(n,p)");
    regime_ = k <= static_cast<int>(binomial(n - 1, p - 1));
}

namespace {

// Structure constants of the compound map A -> M. Immutable once built;
// cached per (n,p).
struct CompoundStructure {
    IndexFamily family;
    // off-diagonal coupling: M(ri,rj) = sign * A(i,j) where the subsets at
    // ranks ri<rj differ by exactly the exchange i<->j
    struct OffDiag {
        int ri, rj, i, j;
        double sign;
    };
    std::vector<OffDiag> offdiag;

    explicit CompoundStructure(int n, int p) : family(n, p) {
        const int count = family.count();
        for (int a = 0; a < count; ++a) {
            const auto& sa = family.set(a);
            for (int b = a + 1; b < count; ++b) {
                const auto& sb = family.set(b);
                std::vector<int> only_a, only_b;
                std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                    std::back_inserter(only_a));
                std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(),
                                    std::back_inserter(only_b));
                if (only_a.size() != 1) continue;
                const int i = only_a[0], j = only_b[0];
                const int pos_i = static_cast<int>(
                    std::lower_bound(sa.begin(), sa.end(), i) - sa.begin());
                const int pos_j = static_cast<int>(
                    std::lower_bound(sb.begin(), sb.end(), j) - sb.begin());
                const double sign = ((pos_i + pos_j) % 2 == 0) ? 1.0 : -1.0;
                offdiag.push_back({a, b, i, j, sign});
            }
        }
    }

    static const CompoundStructure& get(int n, int p) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<CompoundStructure>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{n, p}];
        if (!slot) slot = std::make_unique<CompoundStructure>(n, p);
        return *slot;
    }
};

void check_dims(const SymMatrix& a, const OperatorSignature& sig) {
    if (a.dim() != sig.n)
        throw InvalidInputError("signature dimension " + std::to_string(sig.n) +
                                " does not match matrix dimension " +
                                std::to_string(a.dim()));
}

}  // namespace

SymMatrix additive_compound(const SymMatrix& a, int p) {
    const int n = a.dim();
    if (p < 1 || p > n)
        throw InvalidInputError("additive_compound: require 1 <= p <= dim");
    if (p == n) {
        SymMatrix m(1);
        m.set(0, 0, a.trace());
        return m;
    }
    const auto& st = CompoundStructure::get(n, p);
    SymMatrix m(st.family.count());
    for (int r = 0; r < st.family.count(); ++r) {
        double d = 0.0;
        for (int i : st.family.set(r)) d += a(i, i);
        m.set(r, r, d);
    }
    for (const auto& e : st.offdiag) m.set(e.ri, e.rj, e.sign * a(e.i, e.j));
    return m;
}

EigenTuple lambda_of(const SymMatrix& a, int p) {
    return EigenTuple(eigen_sym(additive_compound(a, p)).values);
}

namespace {

// sigma_0..sigma_k of the sum tuple, without eigendecomposition.
std::vector<double> lambda_sigmas(const SymMatrix& a, const OperatorSignature& sig) {
    check_dims(a, sig);
    return sigma_prefix_of_matrix(additive_compound(a, sig.p), sig.k);
}

}  // namespace

bool is_admissible(const SymMatrix& a, const OperatorSignature& sig) {
    const auto sig_prefix = lambda_sigmas(a, sig);
    for (int j = 1; j <= sig.k; ++j)
        if (!(sig_prefix[static_cast<std::size_t>(j)] > 0.0)) return false;
    return true;
}

double admissibility_margin(const SymMatrix& a, const OperatorSignature& sig) {
    const auto sig_prefix = lambda_sigmas(a, sig);
    const double unit = 1.0 + a.max_abs();
    double margin = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (int j = 1; j <= sig.k; ++j) {
        scale *= unit;
        margin = std::min(margin, sig_prefix[static_cast<std::size_t>(j)] /
                                      (binomial(sig.N(), j) * scale));
    }
    return margin;
}

double F_value(const SymMatrix& a, const OperatorSignature& sig) {
    const auto sig_prefix = lambda_sigmas(a, sig);
    for (int j = 1; j <= sig.k; ++j)
        if (!(sig_prefix[static_cast<std::size_t>(j)] > 0.0))
            throw AdmissibilityError("F_value: Hessian is not (Lambda,k)-convex");
    const double sk = sig_prefix[static_cast<std::size_t>(sig.k)];
    const double sl = sig_prefix[static_cast<std::size_t>(sig.l)];
    return std::pow(sk / sl, 1.0 / (sig.k - sig.l));
}

SymMatrix F_gradient(const SymMatrix& a, const OperatorSignature& sig) {
    check_dims(a, sig);
    const SymMatrix m = additive_compound(a, sig.p);
    const auto sig_prefix = sigma_prefix_of_matrix(m, sig.k);
    for (int j = 1; j <= sig.k; ++j)
        if (!(sig_prefix[static_cast<std::size_t>(j)] > 0.0))
            throw AdmissibilityError("F_gradient: Hessian is not (Lambda,k)-convex");
    const double sk = sig_prefix[static_cast<std::size_t>(sig.k)];
    const double sl = sig_prefix[static_cast<std::size_t>(sig.l)];
    const double f = std::pow(sk / sl, 1.0 / (sig.k - sig.l));

    // dF/dM = f/(k-l) * (T_{k-1}/sigma_k - T_{l-1}/sigma_l), with T_{-1} = 0.
    const int nn = m.dim();
    Eigen::MatrixXd g = newton_transform(m, sig.k - 1).to_dense() / sk;
    if (sig.l > 0) g -= newton_transform(m, sig.l - 1).to_dense() / sl;
    g *= f / (sig.k - sig.l);

    // Pull back through M's dependence on A: the diagonal of M collects
    // a_ii over subset members; each off-diagonal entry is sign * a_ij.
    if (sig.p == sig.n) {
        // 1x1 trace compound: dM/dA = identity on the diagonal
        Eigen::MatrixXd out = g(0, 0) * Eigen::MatrixXd::Identity(sig.n, sig.n);
        return SymMatrix::from_dense(out);
    }
    const auto& st = CompoundStructure::get(sig.n, sig.p);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sig.n, sig.n);
    for (int r = 0; r < nn; ++r)
        for (int i : st.family.set(r)) out(i, i) += g(r, r);
    for (const auto& e : st.offdiag) {
        const double v = e.sign * g(e.ri, e.rj);
        out(e.i, e.j) += v;
        out(e.j, e.i) += v;
    }
    return SymMatrix::from_dense(out);
}

double regime_constants(const OperatorSignature& sig) {
    return sig.p * std::pow(binomial(sig.N(), sig.k) / binomial(sig.N(), sig.l),
                            1.0 / (sig.k - sig.l));
}

}  // namespace hq
