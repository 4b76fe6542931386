#include "hq/problem.hpp"

#include <cmath>
#include <sstream>

#include "hq/sampling.hpp"

namespace hq {

void domain_bounds(const ProblemSpec& prob, Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
    if (const auto* box = std::get_if<BoxDomain>(&prob.domain)) {
        lo = box->lo;
        hi = box->hi;
        return;
    }
    const auto& ball = std::get<BallDomain>(prob.domain);
    lo = ball.center.array() - ball.radius;
    hi = ball.center.array() + ball.radius;
}

Eigen::VectorXd domain_center(const ProblemSpec& prob) {
    if (const auto* box = std::get_if<BoxDomain>(&prob.domain))
        return 0.5 * (box->lo + box->hi);
    return std::get<BallDomain>(prob.domain).center;
}

void validate_problem(const ProblemSpec& prob) {
    const int n = prob.sig.n;
    if (const auto* box = std::get_if<BoxDomain>(&prob.domain)) {
        if (box->lo.size() != n || box->hi.size() != n)
            throw ConfigError("domain extents do not match dimension n");
        if (!box->lo.allFinite() || !box->hi.allFinite())
            throw ConfigError("domain extents must be finite");
        for (int a = 0; a < n; ++a)
            if (!(box->hi[a] > box->lo[a]))
                throw ConfigError("domain requires lo < hi on every axis");
    } else {
        const auto& ball = std::get<BallDomain>(prob.domain);
        if (ball.center.size() != n)
            throw ConfigError("ball center does not match dimension n");
        if (!ball.center.allFinite() || !std::isfinite(ball.radius) ||
            !(ball.radius > 0.0))
            throw ConfigError("ball requires finite center and radius > 0");
    }
    if (prob.psi_tilde.dimension() != n || prob.phi.dimension() != n)
        throw ConfigError("expressions were parsed for a different dimension");
    if (prob.phi.references_gradient())
        throw ConfigError("phi must not reference the gradient (p1..pn, q)");

    // positivity of the right-hand side, sampled over the domain box
    Eigen::VectorXd lo, hi;
    domain_bounds(prob, lo, hi);
    HaltonSampler sampler(n);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < 512; ++s) {
        const Eigen::VectorXd t = sampler.next();
        const Eigen::VectorXd x = lo.array() + t.array() * (hi - lo).array();
        double value = 0.0;
        try {
            value = prob.psi_tilde.eval({x, 0.0, zero});
        } catch (const EvalDomainError& e) {
            std::ostringstream msg;
            msg << "psi_tilde failed to evaluate at x = [" << x.transpose()
                << "], u = 0: " << e.what();
            throw ConfigError(msg.str());
        }
        if (!(value > 0.0)) {
            std::ostringstream msg;
            msg << "psi_tilde must be positive; got " << value << " at x = ["
                << x.transpose() << "], u = 0";
            throw ConfigError(msg.str());
        }
    }
}

}  // namespace hq
