#include "hq/radial.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "hq/symfun.hpp"
#include "solve_core.hpp"

namespace hq {

namespace {

void require_radial_grid(const RectGrid& grid) {
    if (grid.n() != 1 || grid.lo()[0] != 0.0 || !(grid.hi()[0] > 0.0))
        throw InvalidInputError("radial profile needs a 1-D grid on [0, R]");
}

// one-dimensional derivative samples at node i (m >= 5 guaranteed by RectGrid)
double d1_at(const Eigen::VectorXd& u, int i, double h) {
    const int m = static_cast<int>(u.size());
    if (i == 0) return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    if (i == m - 1)
        return (3.0 * u[m - 1] - 4.0 * u[m - 2] + u[m - 3]) / (2.0 * h);
    return (u[i + 1] - u[i - 1]) / (2.0 * h);
}

double d2_at(const Eigen::VectorXd& u, int i, double h) {
    const int m = static_cast<int>(u.size());
    const double h2 = h * h;
    if (i == 0) return (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    if (i == m - 1)
        return (2.0 * u[m - 1] - 5.0 * u[m - 2] + 4.0 * u[m - 3] - u[m - 4]) / h2;
    return (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
}

}  // namespace

RadialDerivatives radial_derivatives(const Field& profile) {
    require_radial_grid(*profile.grid);
    const int m = static_cast<int>(profile.grid->node_count());
    const double h = profile.grid->spacing()[0];
    RadialDerivatives out;
    out.upp.resize(m);
    out.w.resize(m);
    out.up.resize(m);
    for (int i = 0; i < m; ++i) {
        out.upp[i] = d2_at(profile.values, i, h);
        out.up[i] = d1_at(profile.values, i, h);
        out.w[i] = i == 0 ? out.upp[0] : out.up[i] / (i * h);
    }
    return out;
}

EigenTuple radial_lambda(double upp, double w, const OperatorSignature& sig) {
    const int ma = static_cast<int>(binomial(sig.n - 1, sig.p - 1));
    const int mb = static_cast<int>(binomial(sig.n - 1, sig.p));
    if (ma + mb != sig.N())
        throw NumericalError("radial multiplicities fail Pascal's identity");
    Eigen::VectorXd lam(sig.N());
    lam.head(ma).setConstant(upp + (sig.p - 1) * w);
    lam.tail(mb).setConstant(sig.p * w);
    return EigenTuple(lam);
}

RadialSystem::RadialSystem(std::shared_ptr<const RectGrid> grid,
                           OperatorSignature sig, PsiFn psi, PhiFn phi)
    : grid_(std::move(grid)), sig_(sig), psi_(std::move(psi)), phi_(std::move(phi)) {
    if (!grid_) throw InvalidInputError("RadialSystem: null grid");
    require_radial_grid(*grid_);
    if (!psi_ || !phi_) throw InvalidInputError("RadialSystem: null callback");
    mult_a_ = static_cast<int>(binomial(sig_.n - 1, sig_.p - 1));
    mult_b_ = static_cast<int>(binomial(sig_.n - 1, sig_.p));
    if (mult_a_ + mult_b_ != sig_.N())
        throw NumericalError("radial multiplicities fail Pascal's identity");
}

long RadialSystem::size() const { return grid_->node_count(); }

Eigen::VectorXd RadialSystem::embed(double value) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sig_.n);
    x[0] = value;
    return x;
}

Eigen::VectorXd RadialSystem::residual(const Eigen::VectorXd& u) const {
    const int m = static_cast<int>(size());
    if (u.size() != m) throw InvalidInputError("RadialSystem: iterate size mismatch");
    const double h = grid_->spacing()[0];
    const double radius = grid_->hi()[0];
    Eigen::VectorXd r(m);
    r[0] = d1_at(u, 0, h);
    const Eigen::VectorXd nu = embed(1.0);
    r[m - 1] = d1_at(u, m - 1, h) -
               phi_(embed(radius), u[m - 1], nu).value;
    for (int i = 1; i + 1 < m; ++i) {
        const double ri = i * h;
        const double upp = d2_at(u, i, h);
        const double up = d1_at(u, i, h);
        const EigenTuple lam = radial_lambda(upp, up / ri, sig_);
        if (!in_gamma_k(lam, sig_.k))
            throw AdmissibilityError("inadmissible radial Hessian at node " +
                                     std::to_string(i));
        r[i] = quotient_f(lam, sig_.k, sig_.l) -
               psi_(embed(ri), u[i], embed(up)).value;
    }
    return r;
}

Eigen::SparseMatrix<double> RadialSystem::jacobian(const Eigen::VectorXd& u) const {
    const int m = static_cast<int>(size());
    if (u.size() != m) throw InvalidInputError("RadialSystem: iterate size mismatch");
    const double h = grid_->spacing()[0];
    const double radius = grid_->hi()[0];
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m) * 6);

    const double c = 1.0 / (2.0 * h);
    trips.emplace_back(0, 0, -3.0 * c);
    trips.emplace_back(0, 1, 4.0 * c);
    trips.emplace_back(0, 2, -1.0 * c);

    trips.emplace_back(m - 1, m - 1, 3.0 * c);
    trips.emplace_back(m - 1, m - 2, -4.0 * c);
    trips.emplace_back(m - 1, m - 3, 1.0 * c);
    trips.emplace_back(m - 1, m - 1,
                       -phi_(embed(radius), u[m - 1], embed(1.0)).d_u);

    const double h2 = h * h;
    for (int i = 1; i + 1 < m; ++i) {
        const double ri = i * h;
        const double upp = d2_at(u, i, h);
        const double up = d1_at(u, i, h);
        const double w = up / ri;
        const EigenTuple lam = radial_lambda(upp, w, sig_);
        const Eigen::VectorXd grad = quotient_grad(lam, sig_.k, sig_.l);
        const double ga = grad[0];            // group of u'' + (p-1)w
        const double gb = grad[mult_a_];      // group of p*w
        const double df_dupp = mult_a_ * ga;
        const double df_dw = mult_a_ * ga * (sig_.p - 1) + mult_b_ * gb * sig_.p;

        trips.emplace_back(i, i - 1, df_dupp / h2);
        trips.emplace_back(i, i, -2.0 * df_dupp / h2);
        trips.emplace_back(i, i + 1, df_dupp / h2);

        const double wc = df_dw / (ri * 2.0 * h);
        trips.emplace_back(i, i - 1, -wc);
        trips.emplace_back(i, i + 1, wc);

        const PsiEval pe = psi_(embed(ri), u[i], embed(up));
        trips.emplace_back(i, i, -pe.d_u);
        const double dup = pe.d_p.size() > 0 ? pe.d_p[0] : 0.0;
        if (dup != 0.0) {
            trips.emplace_back(i, i - 1, dup * c);
            trips.emplace_back(i, i + 1, -dup * c);
        }
    }
    Eigen::SparseMatrix<double> jac(m, m);
    jac.setFromTriplets(trips.begin(), trips.end());
    jac.makeCompressed();
    return jac;
}

double RadialSystem::margin(const Eigen::VectorXd& u) const {
    // Interior nodes only; the endpoint rows are the symmetry and Neumann
    // conditions, where the operator is never evaluated.
    const Field profile(grid_, u);
    const RadialDerivatives d = radial_derivatives(profile);
    double out = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < u.size(); ++i) {
        const EigenTuple lam = radial_lambda(d.upp[i], d.w[i], sig_);
        const double unit = 1.0 + std::max(std::abs(d.upp[i]), std::abs(d.w[i]));
        double scale = 1.0;
        for (int j = 1; j <= sig_.k; ++j) {
            scale *= unit;
            out = std::min(out, sigma_k(lam, j) / (binomial(sig_.N(), j) * scale));
        }
    }
    return out;
}

double RadialSystem::interior_scale(const Eigen::VectorXd& u) const {
    const int m = static_cast<int>(size());
    const double h = grid_->spacing()[0];
    double s = 0.0;
    for (int i = 1; i + 1 < m; ++i) {
        const double up = d1_at(u, i, h);
        s = std::max(s, std::abs(psi_(embed(i * h), u[i], embed(up)).value));
    }
    return 1.0 + s;
}

void RadialSystem::residual_norms(const Eigen::VectorXd& r, double& interior,
                                  double& boundary) const {
    const int m = static_cast<int>(size());
    boundary = std::max(std::abs(r[0]), std::abs(r[m - 1]));
    interior = 0.0;
    for (int i = 1; i + 1 < m; ++i) interior = std::max(interior, std::abs(r[i]));
}

void fill_radial_stats(const Field& profile, const OperatorSignature& sig,
                       SolveReport& report) {
    const RadialDerivatives d = radial_derivatives(profile);
    const double umin = profile.values.minCoeff();
    const double umax = profile.values.maxCoeff();
    report.sup_u = std::max(std::abs(umin), std::abs(umax));
    report.osc_u = umax - umin;
    report.sup_grad = d.up.cwiseAbs().maxCoeff();
    report.sup_hess =
        std::max(d.upp.cwiseAbs().maxCoeff(), d.w.cwiseAbs().maxCoeff());
    report.admissibility_margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < profile.values.size(); ++i) {
        const EigenTuple lam = radial_lambda(d.upp[i], d.w[i], sig);
        const double unit = 1.0 + std::max(std::abs(d.upp[i]), std::abs(d.w[i]));
        double scale = 1.0;
        for (int j = 1; j <= sig.k; ++j) {
            scale *= unit;
            report.admissibility_margin =
                std::min(report.admissibility_margin,
                         sigma_k(lam, j) / (binomial(sig.N(), j) * scale));
        }
    }
}

std::pair<Field, SolveReport> radial_solve(const ProblemSpec& prob, int m,
                                           const NewtonOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    detail::validate_options(opts);
    const auto* ball = std::get_if<BallDomain>(&prob.domain);
    if (!ball)
        throw InvalidInputError("radial_solve requires a ball domain");
    if (ball->center.norm() > 1e-12 * (1.0 + ball->radius))
        throw ConfigError(
            "radial_solve requires the ball centered at the origin "
            "(r in expressions is the distance from the origin)");
    if (!prob.psi_tilde.radial_only() || !prob.phi.radial_only())
        throw ConfigError("radial data may depend only on r, u and q");

    auto grid = std::make_shared<RectGrid>(
        Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, ball->radius),
        std::vector<int>{m});

    const detail::Homotopy hom =
        detail::make_homotopy(prob.sig, psi_from_ast(prob.psi_tilde),
                              phi_from_ast(prob.phi),
                              Eigen::VectorXd::Zero(prob.sig.n), opts.A0);

    const double h = grid->spacing()[0];
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) u[i] = 0.5 * opts.A0 * (i * h) * (i * h);

    const detail::SystemFactory factory = [&](double t) {
        return std::make_unique<RadialSystem>(grid, prob.sig, hom.psi_at(t),
                                              hom.phi_at(t));
    };
    SolveReport rep;
    detail::continuation_march(factory, u, opts, rep);
    Field out(grid, std::move(u));
    fill_radial_stats(out, prob.sig, rep);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
    return {std::move(out), rep};
}

}  // namespace hq
