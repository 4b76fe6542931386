#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hq/spectral.hpp"
#include "oracle.hpp"

using hq::SymMatrix;

TEST_CASE("eigen_sym worked examples") {
    const auto id = hq::eigen_sym(SymMatrix::identity(3));
    for (int i = 0; i < 3; ++i) CHECK(id.values[i] == doctest::Approx(1.0));

    SymMatrix two(2);
    two.set(0, 0, 2.0);
    two.set(1, 1, 2.0);
    two.set(0, 1, 1.0);
    const auto d2 = hq::eigen_sym(two);
    CHECK(d2.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d2.values[1] == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::VectorXd d(2);
    d << 5, -2;
    const auto dd = hq::eigen_sym(SymMatrix::diagonal(d));
    CHECK(dd.values[0] == doctest::Approx(5.0));
    CHECK(dd.values[1] == doctest::Approx(-2.0));
    // rows are eigenvectors of a diagonal matrix: signed unit vectors
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(dd.vectors(i, j)) ==
                  doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("reconstruction, orthogonality and ordering on random matrices") {
    std::mt19937 rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 10);
        const double scale = (trial % 3 == 0) ? 1e6 : 1.0;
        const SymMatrix a = oracle::random_sym(rng, m, scale);
        const auto ed = hq::eigen_sym(a);

        const Eigen::MatrixXd q = ed.vectors;
        const Eigen::MatrixXd rec =
            q.transpose() * ed.values.asDiagonal() * q;
        const double norm = std::max(1e-300, a.to_dense().cwiseAbs().maxCoeff());
        CHECK((rec - a.to_dense()).cwiseAbs().maxCoeff() <= 1e-10 * norm);

        const Eigen::MatrixXd gram = q * q.transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <=
              1e-10);

        for (int i = 0; i + 1 < m; ++i) CHECK(ed.values[i] >= ed.values[i + 1]);
    }
}

TEST_CASE("eigenvalue sums and products match trace and determinant") {
    std::mt19937 rng(888);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 6);
        const SymMatrix a = oracle::random_sym(rng, m);
        const auto ed = hq::eigen_sym(a);

        CHECK(ed.values.sum() ==
              doctest::Approx(a.trace()).epsilon(1e-9).scale(1.0 + std::abs(a.trace())));

        const double det = a.to_dense().determinant();
        CHECK(ed.values.prod() ==
              doctest::Approx(det).epsilon(1e-9).scale(1.0 + std::abs(det)));
    }
}
