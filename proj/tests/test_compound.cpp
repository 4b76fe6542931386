#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "hq/compound.hpp"
#include "hq/spectral.hpp"
#include "oracle.hpp"

using hq::OperatorSignature;
using hq::SymMatrix;

namespace {

// random admissible diagonal matrix; optionally sorted descending
SymMatrix admissible_diag(std::mt19937& rng, const OperatorSignature& sig,
                          bool descending) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd base(sig.n);
    for (int i = 0; i < sig.n; ++i) base[i] = uni(rng);
    for (double s = 0.0;; s = (s == 0.0 ? 0.25 : s * 2.0)) {
        Eigen::VectorXd d = base.array() + s;
        if (descending) std::sort(d.data(), d.data() + d.size(), std::greater<>());
        const SymMatrix m = SymMatrix::diagonal(d);
        if (hq::admissibility_margin(m, sig) > 1e-6) return m;
    }
}

}  // namespace

TEST_CASE("index_sets enumerates lexicographic subsets (0-based)") {
    const hq::IndexFamily f32 = hq::index_sets(3, 2);
    REQUIRE(f32.count() == 3);
    CHECK(f32.set(0) == std::vector<int>{0, 1});
    CHECK(f32.set(1) == std::vector<int>{0, 2});
    CHECK(f32.set(2) == std::vector<int>{1, 2});

    const hq::IndexFamily f41 = hq::index_sets(4, 1);
    REQUIRE(f41.count() == 4);
    for (int i = 0; i < 4; ++i) CHECK(f41.set(i) == std::vector<int>{i});

    const hq::IndexFamily f43 = hq::index_sets(4, 3);
    REQUIRE(f43.count() == 4);
    CHECK(f43.set(0) == std::vector<int>{0, 1, 2});
    CHECK(f43.set(1) == std::vector<int>{0, 1, 3});
    CHECK(f43.set(2) == std::vector<int>{0, 2, 3});
    CHECK(f43.set(3) == std::vector<int>{1, 2, 3});

    CHECK_THROWS_AS((void)hq::index_sets(3, 0), hq::InvalidInputError);
    CHECK_THROWS_AS((void)hq::index_sets(3, 3), hq::InvalidInputError);
}

TEST_CASE("index_sets rank and subset maps are mutually inverse") {
    for (int n = 2; n <= 7; ++n)
        for (int p = 1; p < n; ++p) {
            const hq::IndexFamily fam = hq::index_sets(n, p);
            CHECK(fam.count() == static_cast<int>(hq::binomial(n, p)));
            for (int r = 0; r < fam.count(); ++r)
                CHECK(fam.rank_of(fam.set(r)) == r);
        }
}

TEST_CASE("operator signatures validate and derive the regime flag") {
    const OperatorSignature a(3, 2, 2, 0);
    CHECK(a.N() == 3);
    CHECK(a.theorem_regime());  // k = 2 <= C(2,1) = 2

    CHECK(OperatorSignature(4, 2, 3, 1).theorem_regime());       // 3 <= C(3,1)=3
    CHECK_FALSE(OperatorSignature(3, 2, 3, 0).theorem_regime()); // 3 > 2

    CHECK_THROWS_AS(OperatorSignature(3, 0, 1, 0), hq::InvalidInputError);
    CHECK_THROWS_AS(OperatorSignature(3, 3, 1, 0), hq::InvalidInputError);
    CHECK_THROWS_AS(OperatorSignature(3, 2, 4, 0), hq::InvalidInputError);
    CHECK_THROWS_AS(OperatorSignature(3, 2, 2, 2), hq::InvalidInputError);
    try {
        OperatorSignature bad(3, 2, 2, 2);
    } catch (const hq::InvalidInputError& e) {
        CHECK(std::string(e.what()).find("0 <= l < k") != std::string::npos);
    }
}

TEST_CASE("additive_compound worked examples") {
    Eigen::VectorXd d(3);
    d << 1.5, -0.25, 4.0;
    const SymMatrix c2 = hq::additive_compound(SymMatrix::diagonal(d), 2);
    REQUIRE(c2.dim() == 3);
    CHECK(c2(0, 0) == doctest::Approx(1.25));   // a+b
    CHECK(c2(1, 1) == doctest::Approx(5.5));    // a+c
    CHECK(c2(2, 2) == doctest::Approx(3.75));   // b+c
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) CHECK(c2(i, j) == 0.0);

    std::mt19937 rng(11);
    const SymMatrix a = oracle::random_sym(rng, 4);
    const SymMatrix c1 = hq::additive_compound(a, 1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) CHECK(c1(i, j) == doctest::Approx(a(i, j)));

    const SymMatrix cn = hq::additive_compound(a, 4);
    REQUIRE(cn.dim() == 1);
    CHECK(cn(0, 0) == doctest::Approx(a.trace()));
}

TEST_CASE("compound spectrum equals the p-sums of the eigenvalues") {
    std::mt19937 rng(2718);
    for (int n = 2; n <= 6; ++n)
        for (int p = 1; p < n; ++p)
            for (int trial = 0; trial < 60; ++trial) {
                const SymMatrix a = oracle::random_sym(rng, n);
                const Eigen::VectorXd spec =
                    hq::eigen_sym(hq::additive_compound(a, p)).values;
                const std::vector<double> want =
                    oracle::enum_psums(hq::eigen_sym(a).values, p);
                REQUIRE(spec.size() == static_cast<long>(want.size()));
                const double tol = 1e-9 * (1.0 + a.max_abs());
                for (long i = 0; i < spec.size(); ++i)
                    CHECK(std::abs(spec[i] - want[static_cast<std::size_t>(i)]) <=
                          tol);
            }
}

TEST_CASE("lambda_of worked examples") {
    const hq::EigenTuple li = hq::lambda_of(SymMatrix::identity(3), 2);
    for (int i = 0; i < 3; ++i) CHECK(li[i] == doctest::Approx(2.0));

    Eigen::VectorXd d(3);
    d << 3, 1, 0;
    const hq::EigenTuple ld = hq::lambda_of(SymMatrix::diagonal(d), 2);
    CHECK(ld[0] == doctest::Approx(4.0));
    CHECK(ld[1] == doctest::Approx(3.0));
    CHECK(ld[2] == doctest::Approx(1.0));

    Eigen::VectorXd d2(2);
    d2 << 5, -1;
    const hq::EigenTuple l1 = hq::lambda_of(SymMatrix::diagonal(d2), 1);
    CHECK(l1[0] == doctest::Approx(5.0));
    CHECK(l1[1] == doctest::Approx(-1.0));
}

TEST_CASE("is_admissible on the k=2 compound cone") {
    const OperatorSignature sig(3, 2, 2, 0);
    CHECK(hq::is_admissible(SymMatrix::identity(3), sig));

    Eigen::VectorXd d(3);
    d << 1, 1, -1;  // Lambda = (2,0,0): sigma_2 = 0, not strict
    CHECK_FALSE(hq::is_admissible(SymMatrix::diagonal(d), sig));

    d << 1, 1, -0.5;  // Lambda = (2,0.5,0.5): sigma_1 = 3, sigma_2 = 2.25
    CHECK(hq::is_admissible(SymMatrix::diagonal(d), sig));
}

TEST_CASE("F_value worked examples, cross-path agreement, homogeneity") {
    CHECK(hq::F_value(SymMatrix::identity(3), OperatorSignature(3, 2, 2, 0)) ==
          doctest::Approx(std::sqrt(12.0)).epsilon(1e-13));
    CHECK(hq::F_value(SymMatrix::identity(3), OperatorSignature(3, 2, 2, 1)) ==
          doctest::Approx(2.0).epsilon(1e-13));

    Eigen::VectorXd d(3);
    d << 3, 1, 0;
    CHECK(hq::F_value(SymMatrix::diagonal(d), OperatorSignature(3, 2, 2, 0)) ==
          doctest::Approx(std::sqrt(19.0)).epsilon(1e-12));

    d << 1, 1, -1;
    CHECK_THROWS_AS(
        (void)hq::F_value(SymMatrix::diagonal(d), OperatorSignature(3, 2, 2, 0)),
        hq::AdmissibilityError);

    std::mt19937 rng(555);
    const OperatorSignature sigs[] = {
        {3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}, {4, 3, 3, 0}, {5, 3, 4, 2}};
    for (const auto& sig : sigs) {
        for (int trial = 0; trial < 50; ++trial) {
            const SymMatrix a = oracle::random_admissible(rng, sig);
            const double direct = hq::F_value(a, sig);

            // eigenvalue path
            const double via_eigs =
                hq::quotient_f(hq::lambda_of(a, sig.p), sig.k, sig.l);
            CHECK(direct == doctest::Approx(via_eigs).epsilon(1e-9));

            // degree-1 homogeneity
            const double c = 0.25 + 3.0 * (trial / 50.0);
            SymMatrix ca(sig.n);
            for (int i = 0; i < sig.n; ++i)
                for (int j = 0; j <= i; ++j) ca.set(i, j, c * a(i, j));
            CHECK(hq::F_value(ca, sig) ==
                  doctest::Approx(c * direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("F_gradient is the identity when F is the trace") {
    const OperatorSignature sig(2, 1, 1, 0);
    std::mt19937 rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const SymMatrix a = oracle::random_admissible(rng, sig);
        const SymMatrix g = hq::F_gradient(a, sig);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j <= i; ++j)
                CHECK(g(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("F_gradient worked examples against finite differences") {
    const OperatorSignature sig(3, 2, 2, 0);

    const SymMatrix gi = hq::F_gradient(SymMatrix::identity(3), sig);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j)
            CHECK(gi(i, j) ==
                  doctest::Approx(i == j ? 2.0 / std::sqrt(3.0) : 0.0).epsilon(1e-12));

    Eigen::VectorXd d(3);
    d << 3, 1, 0;
    const SymMatrix a = SymMatrix::diagonal(d);
    const SymMatrix ga = hq::F_gradient(a, sig);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) CHECK(std::abs(ga(i, j)) < 1e-12);
    for (int i = 0; i < 3; ++i) {
        const double fd = oracle::central_diff(
            [&](double x) {
                SymMatrix b = a;
                b.set(i, i, x);
                return hq::F_value(b, sig);
            },
            a(i, i), 1e-6);
        CHECK(ga(i, i) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("F_gradient matches finite differences on random admissible input") {
    std::mt19937 rng(9090);
    const OperatorSignature sigs[] = {
        {3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}, {4, 3, 3, 0}};
    for (const auto& sig : sigs) {
        for (int trial = 0; trial < 30; ++trial) {
            const SymMatrix a = oracle::random_admissible(rng, sig);
            const SymMatrix g = hq::F_gradient(a, sig);
            for (int i = 0; i < sig.n; ++i)
                for (int j = 0; j <= i; ++j) {
                    const double fd = oracle::central_diff(
                        [&](double x) {
                            SymMatrix b = a;
                            b.set(i, j, x);  // symmetric: moves (i,j) and (j,i)
                            return hq::F_value(b, sig);
                        },
                        a(i, j), 1e-6 * (1.0 + std::abs(a(i, j))));
                    const double want = (i == j) ? g(i, i) : 2.0 * g(i, j);
                    CHECK(fd == doctest::Approx(want).epsilon(1e-6).scale(
                                    1.0 + std::abs(want)));
                }
        }
    }
}

TEST_CASE("F_gradient is symmetric positive definite on admissible input") {
    std::mt19937 rng(41);
    const OperatorSignature sigs[] = {
        {3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}, {4, 3, 3, 0}, {5, 2, 3, 0}};
    for (const auto& sig : sigs)
        for (int trial = 0; trial < 60; ++trial) {
            const SymMatrix g =
                hq::F_gradient(oracle::random_admissible(rng, sig), sig);
            const Eigen::VectorXd ev = hq::eigen_sym(g).values;
            CHECK(ev[ev.size() - 1] > 0.0);
        }
}

TEST_CASE("eigenvalue derivatives are ordered against the eigenvalue order") {
    // descending diagonal => nondecreasing diagonal of the gradient
    std::mt19937 rng(606);
    const OperatorSignature sigs[] = {
        {3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}, {4, 3, 3, 0}};
    for (const auto& sig : sigs)
        for (int trial = 0; trial < 80; ++trial) {
            const SymMatrix a = admissible_diag(rng, sig, true);
            const SymMatrix g = hq::F_gradient(a, sig);
            for (int i = 0; i + 1 < sig.n; ++i)
                CHECK(g(i, i) <= g(i + 1, i + 1) + 1e-10);
        }
}

TEST_CASE("gradient trace meets the regime lower bound") {
    std::mt19937 rng(7171);
    const OperatorSignature sigs[] = {
        {3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}, {4, 3, 3, 0}};
    for (const auto& sig : sigs) {
        const double bound = hq::regime_constants(sig);
        for (int trial = 0; trial < 100; ++trial) {
            const SymMatrix a = admissible_diag(rng, sig, false);
            CHECK(hq::F_gradient(a, sig).trace() >= bound - 1e-10);
        }
    }
}

TEST_CASE("per-eigendirection fraction stays positive in the theorem regime") {
    std::mt19937 rng(8282);
    const OperatorSignature sigs[] = {{3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}};
    for (const auto& sig : sigs) {
        REQUIRE(sig.theorem_regime());
        double min_fraction = 1.0;
        for (int trial = 0; trial < 100; ++trial) {
            const SymMatrix g =
                hq::F_gradient(admissible_diag(rng, sig, false), sig);
            double lo = g(0, 0), total = 0.0;
            for (int i = 0; i < sig.n; ++i) {
                lo = std::min(lo, g(i, i));
                total += g(i, i);
            }
            CHECK(lo > 0.0);
            min_fraction = std::min(min_fraction, lo / total);
        }
        CHECK(min_fraction > 0.0);
        MESSAGE("empirical min fraction for (", sig.n, ",", sig.p, ",", sig.k, ",",
                sig.l, "): ", min_fraction);
    }
}

TEST_CASE("midpoint concavity in the Hessian eigenvalues") {
    std::mt19937 rng(939);
    const OperatorSignature sigs[] = {
        {3, 2, 2, 0}, {3, 2, 2, 1}, {4, 2, 3, 1}, {4, 3, 3, 0}};
    for (const auto& sig : sigs)
        for (int trial = 0; trial < 150; ++trial) {
            const SymMatrix a = admissible_diag(rng, sig, false);
            const SymMatrix b = admissible_diag(rng, sig, false);
            SymMatrix mid(sig.n);
            for (int i = 0; i < sig.n; ++i)
                mid.set(i, i, 0.5 * (a(i, i) + b(i, i)));
            const double favg =
                0.5 * (hq::F_value(a, sig) + hq::F_value(b, sig));
            CHECK(hq::F_value(mid, sig) >= favg - 1e-12);
        }
}

TEST_CASE("regime_constants worked examples") {
    CHECK(hq::regime_constants(OperatorSignature(3, 2, 2, 0)) ==
          doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
    CHECK(hq::regime_constants(OperatorSignature(3, 2, 2, 1)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(hq::regime_constants(OperatorSignature(2, 1, 1, 0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
}
