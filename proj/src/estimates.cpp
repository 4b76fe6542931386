#include "hq/estimates.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hq/radial.hpp"
#include "hq/sampling.hpp"
#include "hq/spectral.hpp"

namespace hq {

namespace {

std::string format_state(const Eigen::VectorXd& x, double u) {
    std::ostringstream s;
    s << "x = [" << x.transpose() << "], u = " << u;
    return s.str();
}

}  // namespace

StructuralReport check_structural(const ProblemSpec& prob, const SamplerConfig& cfg) {
    if (cfg.samples < 1 || !(cfg.u_range >= 0.0))
        throw InvalidInputError("check_structural: bad sampler configuration");
    const int n = prob.sig.n;
    Eigen::VectorXd lo, hi;
    domain_bounds(prob, lo, hi);
    HaltonSampler sampler(n + 1, cfg.seed);
    const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(n);

    StructuralReport rep;
    rep.c0_measured = std::numeric_limits<double>::infinity();
    rep.alpha0_measured = std::numeric_limits<double>::infinity();
    for (int s = 0; s < cfg.samples; ++s) {
        const Eigen::VectorXd t = sampler.next();
        const Eigen::VectorXd x = lo.array() + t.head(n).array() * (hi - lo).array();
        const double u = (2.0 * t[n] - 1.0) * cfg.u_range;
        try {
            const Partials ph = prob.phi.eval_with_partials({x, u, p0});
            if (-ph.d_u < rep.c0_measured) {
                rep.c0_measured = -ph.d_u;
                rep.c0_argmin_x = x;
                rep.c0_argmin_u = u;
            }
            const Partials ps = prob.psi_tilde.eval_with_partials({x, u, p0});
            const double alpha = ps.d_u / (ps.value * ps.value);
            if (alpha < rep.alpha0_measured) {
                rep.alpha0_measured = alpha;
                rep.alpha0_argmin_x = x;
                rep.alpha0_argmin_u = u;
            }
        } catch (const EvalDomainError& e) {
            throw Error(std::string(e.what()) + " while sampling at " +
                        format_state(x, u));
        }
    }
    // with constants given, measure against them; otherwise require plain
    // positivity (existence of some admissible constant)
    const double slack = 1e-12;
    rep.c0_ok = prob.structural.c0
                    ? rep.c0_measured >= *prob.structural.c0 - slack
                    : rep.c0_measured > 0.0;
    rep.alpha0_ok = prob.structural.alpha0
                        ? rep.alpha0_measured >= *prob.structural.alpha0 - slack
                        : rep.alpha0_measured > 0.0;
    std::ostringstream desc;
    desc << cfg.samples << " Halton samples (seed " << cfg.seed
         << "), x over the domain box, u in [-" << cfg.u_range << ", "
         << cfg.u_range << "], p = 0";
    rep.sample_description = desc.str();
    return rep;
}

GrowthReport check_growth(const ProblemSpec& prob, const SamplerConfig& cfg) {
    const auto& st = prob.structural;
    if (!st.gamma || !st.C1 || !st.M1)
        throw ConfigError("growth check needs the constants gamma, C1 and M1");
    GrowthReport rep;
    rep.gamma = *st.gamma;
    rep.C1 = *st.C1;
    rep.M1 = *st.M1;
    if (!(rep.gamma < 1.0))
        throw ConfigError("growth check requires gamma < 1");
    if (!(rep.M1 > 0.0) || !(rep.C1 > 0.0))
        throw ConfigError("growth check requires M1 > 0 and C1 > 0");
    if (!(cfg.p_max > rep.M1))
        throw InvalidInputError("check_growth: p_max must exceed M1");

    const int n = prob.sig.n;
    Eigen::VectorXd lo, hi;
    domain_bounds(prob, lo, hi);
    HaltonSampler sampler(2 * n + 2, cfg.seed);

    rep.measured_sup = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
        const Eigen::VectorXd t = sampler.next();
        const Eigen::VectorXd x = lo.array() + t.head(n).array() * (hi - lo).array();
        const double u = (2.0 * t[n] - 1.0) * cfg.u_range;
        Eigen::VectorXd dir = (2.0 * t.segment(n + 1, n).array() - 1.0).matrix();
        const double len = dir.norm();
        if (len == 0.0) continue;
        dir /= len;
        // log-uniform magnitudes: the same quantile gives a larger |p| for a
        // larger p_max, which keeps measured_sup monotone in the range
        const double mag = rep.M1 * std::pow(cfg.p_max / rep.M1, t[2 * n + 1]);
        const Eigen::VectorXd p = mag * dir;
        try {
            const Partials ps = prob.psi_tilde.eval_with_partials({x, u, p});
            const double numer = ps.d_x.norm() + std::abs(ps.d_u) * mag +
                                 ps.d_p.norm() * mag * mag;
            rep.measured_sup =
                std::max(rep.measured_sup, numer / std::pow(mag, 2.0 + rep.gamma));
        } catch (const EvalDomainError& e) {
            throw Error(std::string(e.what()) + " while sampling at " +
                        format_state(x, u) + ", |p| = " + std::to_string(mag));
        }
    }
    rep.ok = rep.measured_sup <= rep.C1 + 1e-12;
    std::ostringstream desc;
    desc << cfg.samples << " Halton samples (seed " << cfg.seed
         << "), |p| log-uniform in (" << rep.M1 << ", " << cfg.p_max << "]";
    rep.sample_description = desc.str();
    return rep;
}

namespace {

// nearest node to the domain center, by per-axis rounding
long center_node(const RectGrid& grid, const Eigen::VectorXd& center) {
    std::vector<int> idx(static_cast<std::size_t>(grid.n()));
    for (int a = 0; a < grid.n(); ++a) {
        const double t = (center[a] - grid.lo()[a]) / grid.spacing()[a];
        const int i = static_cast<int>(std::lround(t));
        idx[static_cast<std::size_t>(a)] =
            std::min(grid.dims()[static_cast<std::size_t>(a)] - 1, std::max(0, i));
    }
    return grid.flat(idx);
}

}  // namespace

BoundReport verify_solution_core(const VerifyInputs& in, const Field& field,
                                 const SolveReport& report) {
    if (!report.converged)
        throw InvalidInputError("verify_solution requires a converged solve");
    if (!(in.gamma < 1.0))
        throw InvalidInputError("verify_solution requires gamma < 1");

    const RectGrid& grid = *field.grid;
    const bool radial =
        grid.n() == 1 && std::holds_alternative<BallDomain>(in.domain);
    if (!radial && grid.n() != in.sig.n)
        throw InvalidInputError("field dimension does not match the signature");

    BoundReport rep;
    const double umax = field.values.maxCoeff();
    const double umin = field.values.minCoeff();
    rep.osc_u = umax - umin;

    double r_in = 0.0;
    Eigen::VectorXd center;
    double osc_inscribed = 0.0;
    double max_phi0 = -std::numeric_limits<double>::infinity();

    if (radial) {
        const auto& ball = std::get<BallDomain>(in.domain);
        r_in = ball.radius;
        const RadialDerivatives d = radial_derivatives(field);
        rep.sup_grad = d.up.cwiseAbs().maxCoeff();
        rep.sup_hess =
            std::max(d.upp.cwiseAbs().maxCoeff(), d.w.cwiseAbs().maxCoeff());
        rep.interior_grad_at_center = std::abs(d.up[0]);
        osc_inscribed = rep.osc_u;  // the profile covers exactly the ball
        Eigen::VectorXd xb = Eigen::VectorXd::Zero(in.sig.n);
        xb[0] = ball.radius;
        Eigen::VectorXd nu = Eigen::VectorXd::Zero(in.sig.n);
        nu[0] = 1.0;
        max_phi0 = in.phi(xb, 0.0, nu).value;
    } else {
        const auto& box = std::get<BoxDomain>(in.domain);
        center = 0.5 * (box.lo + box.hi);
        r_in = ((box.hi - box.lo) * 0.5).minCoeff();
        rep.sup_grad = 0.0;
        rep.sup_hess = 0.0;
        double in_min = std::numeric_limits<double>::infinity();
        double in_max = -std::numeric_limits<double>::infinity();
        for (long v = 0; v < grid.node_count(); ++v) {
            const auto idx = grid.unflat(v);
            const Eigen::VectorXd x = grid.coords(idx);
            rep.sup_grad = std::max(rep.sup_grad, gradient_at(field, v).norm());
            const SymMatrix h = hessian_at(field, v);
            rep.sup_hess =
                std::max(rep.sup_hess, eigen_sym(h).values.cwiseAbs().maxCoeff());
            if ((x - center).norm() <= r_in * (1.0 + 1e-12)) {
                in_min = std::min(in_min, field.values[v]);
                in_max = std::max(in_max, field.values[v]);
            }
            if (grid.is_boundary(idx))
                max_phi0 = std::max(
                    max_phi0, in.phi(x, 0.0, grid.outward_normal(idx)).value);
        }
        osc_inscribed = in_max - in_min;
        rep.interior_grad_at_center =
            gradient_at(field, center_node(grid, center)).norm();
    }

    if (osc_inscribed > 0.0) {
        const double denom = osc_inscribed / r_in +
                             std::pow(osc_inscribed, 2.0 / (1.0 - in.gamma)) +
                             std::pow(osc_inscribed, 1.0 / (1.0 - in.gamma));
        rep.ratio = rep.interior_grad_at_center / denom;
    }

    if (in.c0 && *in.c0 > 0.0) {
        rep.c0_bound_applicable = true;
        const double h_max = grid.spacing().maxCoeff();
        const double sup_abs_u = std::max(std::abs(umax), std::abs(umin));
        rep.c0_bound_lhs = umax;
        rep.c0_bound_rhs = max_phi0 / *in.c0 + 10.0 * h_max * h_max * (1.0 + sup_abs_u);
        rep.c0_bound_ok = rep.c0_bound_lhs <= rep.c0_bound_rhs;
    }
    return rep;
}

BoundReport verify_solution(const ProblemSpec& prob, const Field& field,
                            const SolveReport& report) {
    VerifyInputs in{prob.sig, prob.domain, phi_from_ast(prob.phi),
                    prob.structural.c0, prob.structural.gamma.value_or(0.0)};
    return verify_solution_core(in, field, report);
}

bool ratios_stable(const std::vector<double>& ratios) {
    for (std::size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] > 1.2 * ratios[i - 1] + 1e-12) return false;
    return true;
}

}  // namespace hq
