#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "hq/estimates.hpp"
#include "hq/radial.hpp"

using hq::OperatorSignature;
using hq::ProblemSpec;
using hq::SamplerConfig;

namespace {

ProblemSpec box_problem(const char* psi, const char* phi,
                        hq::StructuralConstants st = {}) {
    const OperatorSignature sig(2, 1, 1, 0);
    return {sig,
            hq::BoxDomain{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)},
            hq::ExprAst::parse(psi, 2),
            hq::ExprAst::parse(phi, 2),
            st};
}

}  // namespace

TEST_CASE("structural minima match the calculus of the data") {
    SUBCASE("phi = -u + g has c0 exactly one") {
        const ProblemSpec prob =
            box_problem("2", "-u + 0.5*x1 + x2^2", {.c0 = 0.5});
        const hq::StructuralReport rep = hq::check_structural(prob);
        CHECK(rep.c0_measured == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(rep.c0_ok);
        CHECK(rep.sample_description.find("Halton") != std::string::npos);
    }
    SUBCASE("psi_tilde = 1 + u has alpha0 near 1/(1+U)^2") {
        const ProblemSpec prob = box_problem("1 + u", "-u", {.alpha0 = 0.2});
        const hq::StructuralReport rep = hq::check_structural(prob);
        CHECK(rep.alpha0_measured >= 0.25);
        CHECK(rep.alpha0_measured == doctest::Approx(0.25).epsilon(1e-3));
        CHECK(rep.alpha0_ok);
        // the minimum sits at the largest sampled u
        CHECK(rep.alpha0_argmin_u > 0.99);
    }
    SUBCASE("u-independent psi_tilde fails any positive alpha0") {
        const ProblemSpec prob = box_problem("2 + x1", "-u", {.alpha0 = 0.1});
        const hq::StructuralReport rep = hq::check_structural(prob);
        CHECK(rep.alpha0_measured == 0.0);
        CHECK(!rep.alpha0_ok);
        CHECK(rep.c0_ok);  // no declared c0, measured minimum is positive
    }
    SUBCASE("declared constants above the measured minimum fail") {
        const ProblemSpec prob = box_problem("1 + u", "-0.5*u", {.c0 = 1.0});
        const hq::StructuralReport rep = hq::check_structural(prob);
        CHECK(rep.c0_measured == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(!rep.c0_ok);
    }
    SUBCASE("fixed seed reproduces the report bit for bit") {
        const ProblemSpec prob = box_problem("1 + u^2", "-u + x1", {});
        SamplerConfig cfg;
        cfg.samples = 2000;
        cfg.seed = 7;
        const hq::StructuralReport a = hq::check_structural(prob, cfg);
        const hq::StructuralReport b = hq::check_structural(prob, cfg);
        CHECK(a.c0_measured == b.c0_measured);
        CHECK(a.alpha0_measured == b.alpha0_measured);
        CHECK(a.c0_argmin_u == b.c0_argmin_u);
        CHECK(a.alpha0_argmin_x == b.alpha0_argmin_x);
    }
}

TEST_CASE("growth report follows the gradient scaling of the data") {
    SUBCASE("constant psi_tilde measures zero") {
        const ProblemSpec prob =
            box_problem("3", "-u", {.gamma = 0.0, .C1 = 2.0, .M1 = 1.0});
        const hq::GrowthReport rep = hq::check_growth(prob, {});
        CHECK(rep.measured_sup == 0.0);
        CHECK(rep.ok);
        CHECK(rep.sample_description.find("log-uniform") != std::string::npos);
    }
    SUBCASE("quadratic gradient growth breaks gamma = 0") {
        const ProblemSpec prob =
            box_problem("1 + q^2", "-u", {.gamma = 0.0, .C1 = 2.0, .M1 = 1.0});
        SamplerConfig cfg;
        const hq::GrowthReport rep = hq::check_growth(prob, cfg);
        // |psi_p| |p|^2 / |p|^2 = 2|p|, unbounded in the sample range
        CHECK(rep.measured_sup > 1000.0);
        CHECK(!rep.ok);

        SamplerConfig wider = cfg;
        wider.p_max = 1e4;
        const hq::GrowthReport rep2 = hq::check_growth(prob, wider);
        CHECK(rep2.measured_sup > rep.measured_sup);
    }
    SUBCASE("q^1.5 growth is exactly 1.5 at gamma = 0.5") {
        const ProblemSpec prob =
            box_problem("1 + q^1.5", "-u", {.gamma = 0.5, .C1 = 2.0, .M1 = 1.0});
        const hq::GrowthReport rep = hq::check_growth(prob, {});
        CHECK(rep.measured_sup == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(rep.ok);
    }
    SUBCASE("missing constants are a configuration error") {
        const ProblemSpec prob = box_problem("3", "-u", {.gamma = 0.0});
        CHECK_THROWS_AS((void)hq::check_growth(prob, {}), hq::ConfigError);
        const ProblemSpec bad_gamma =
            box_problem("3", "-u", {.gamma = 1.0, .C1 = 2.0, .M1 = 1.0});
        CHECK_THROWS_AS((void)hq::check_growth(bad_gamma, {}), hq::ConfigError);
    }
}

TEST_CASE("solution bounds on the exact radial quadratic") {
    const OperatorSignature sig(3, 2, 2, 0);
    ProblemSpec prob{sig,
                     hq::BallDomain{Eigen::VectorXd::Zero(3), 1.0},
                     hq::ExprAst::parse("3.4641016151377544", 3),
                     hq::ExprAst::parse("1 - (u - r^2/2)", 3),
                     {.c0 = 1.0}};
    const auto [profile, report] = hq::radial_solve(prob, 33);
    REQUIRE(report.converged);

    const hq::BoundReport rep = hq::verify_solution(prob, profile, report);
    CHECK(rep.osc_u == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.sup_grad == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.sup_hess == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.interior_grad_at_center <= 1e-8);
    // max u = 1/2 against phi(R,0)/c0 = 3/2 plus the mesh term
    CHECK(rep.c0_bound_applicable);
    CHECK(rep.c0_bound_lhs == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.c0_bound_rhs > 1.5);
    CHECK(rep.c0_bound_ok);

    hq::SolveReport broken = report;
    broken.converged = false;
    CHECK_THROWS_AS((void)hq::verify_solution(prob, profile, broken),
                    hq::InvalidInputError);
}

TEST_CASE("solution bounds on a manufactured box paraboloid") {
    const auto grid = std::make_shared<hq::RectGrid>(
        Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2), std::vector<int>{21, 21});
    Eigen::VectorXd values(grid->node_count());
    const Eigen::VectorXd c = 0.5 * Eigen::VectorXd::Ones(2);
    for (long v = 0; v < grid->node_count(); ++v)
        values[v] = 0.5 * (grid->coords(grid->unflat(v)) - c).squaredNorm();
    const hq::Field field{grid, values};
    hq::SolveReport report;
    report.converged = true;

    SUBCASE("extrema match the closed form") {
        const ProblemSpec prob = box_problem("2", "0.6 - 2*u", {.c0 = 2.0});
        const hq::BoundReport rep = hq::verify_solution(prob, field, report);
        CHECK(rep.osc_u == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(rep.sup_grad == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
        CHECK(rep.sup_hess == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.interior_grad_at_center <= 1e-11);
        CHECK(rep.ratio <= 1e-12);  // degenerate: zero gradient at the center
        // max u = 1/4 vs 0.6/2 + mesh term
        CHECK(rep.c0_bound_applicable);
        CHECK(rep.c0_bound_ok);
    }
    SUBCASE("a tight boundary datum fails the bound") {
        const ProblemSpec prob = box_problem("2", "0.3 - 2*u", {.c0 = 2.0});
        const hq::BoundReport rep = hq::verify_solution(prob, field, report);
        // max u = 1/4 vs 0.15 + 10 h^2 (1 + 1/4) ~ 0.181
        CHECK(!rep.c0_bound_ok);
    }
    SUBCASE("without c0 the bound is not applicable") {
        const ProblemSpec prob = box_problem("2", "0.6 - 2*u", {});
        const hq::BoundReport rep = hq::verify_solution(prob, field, report);
        CHECK(!rep.c0_bound_applicable);
    }
}

TEST_CASE("ratio sequences tolerate twenty percent growth") {
    CHECK(hq::ratios_stable({}));
    CHECK(hq::ratios_stable({5.0}));
    CHECK(hq::ratios_stable({1.0, 1.1, 1.2}));
    CHECK(hq::ratios_stable({0.0, 0.0, 0.0}));
    CHECK(hq::ratios_stable({2.0, 1.0, 0.5}));
    CHECK(!hq::ratios_stable({1.0, 1.3}));
    CHECK(!hq::ratios_stable({1.0, 1.1, 1.4}));
}
