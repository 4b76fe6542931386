#include "hq/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "hq/spectral.hpp"
#include "hq/symfun.hpp"
#include "solve_core.hpp"

namespace hq {

namespace {

std::string node_label(long node, const std::vector<int>& idx) {
    std::ostringstream s;
    s << node << " (index";
    for (int i : idx) s << ' ' << i;
    s << ')';
    return s.str();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

PsiFn psi_from_ast(const ExprAst& ast) {
    return [ast](const Eigen::VectorXd& x, double u, const Eigen::VectorXd& p) {
        const Partials pr = ast.eval_with_partials({x, u, p});
        return PsiEval{pr.value, pr.d_u, pr.d_p};
    };
}

PhiFn phi_from_ast(const ExprAst& ast) {
    return [ast](const Eigen::VectorXd& x, double u, const Eigen::VectorXd&) {
        const Partials pr =
            ast.eval_with_partials({x, u, Eigen::VectorXd::Zero(x.size())});
        return PhiEval{pr.value, pr.d_u};
    };
}

namespace detail {

void validate_options(const NewtonOptions& opts) {
    if (!(opts.tol_r > 0.0) || !(opts.tol_b > 0.0))
        throw InvalidInputError("NewtonOptions: tolerances must be positive");
    if (!(opts.margin >= 0.0))
        throw InvalidInputError("NewtonOptions: margin must be >= 0");
    if (opts.max_iter < 1)
        throw InvalidInputError("NewtonOptions: max_iter must be >= 1");
    if (!(opts.min_step > 0.0) || opts.min_step > 1.0)
        throw InvalidInputError("NewtonOptions: min_step must lie in (0, 1]");
    if (!(opts.A0 > 0.0))
        throw InvalidInputError("NewtonOptions: A0 must be positive");
    if (!(opts.t_step0 > 0.0) || opts.t_step0 > 1.0 || !(opts.t_step_floor > 0.0))
        throw InvalidInputError("NewtonOptions: bad continuation step parameters");
}

PsiFn Homotopy::psi_at(double t) const {
    const double base = psi0;
    const PsiFn target = target_psi;
    return [base, target, t](const Eigen::VectorXd& x, double u,
                             const Eigen::VectorXd& p) {
        PsiEval out;
        out.value = (1.0 - t) * base;
        out.d_u = 0.0;
        out.d_p = Eigen::VectorXd::Zero(p.size());
        if (t > 0.0) {
            const PsiEval e = target(x, u, p);
            out.value += t * e.value;
            out.d_u = t * e.d_u;
            if (e.d_p.size() > 0) out.d_p = t * e.d_p;
        }
        return out;
    };
}

PhiFn Homotopy::phi_at(double t) const {
    const double a = A;
    const Eigen::VectorXd c = center;
    const PhiFn target = target_phi;
    return [a, c, target, t](const Eigen::VectorXd& x, double u,
                             const Eigen::VectorXd& nu) {
        PhiEval out;
        const double u0 = 0.5 * a * (x - c).squaredNorm();
        out.value = (1.0 - t) * (a * nu.dot(x - c) - (u - u0));
        out.d_u = -(1.0 - t);
        if (t > 0.0) {
            const PhiEval e = target(x, u, nu);
            out.value += t * e.value;
            out.d_u += t * e.d_u;
        }
        return out;
    };
}

Homotopy make_homotopy(const OperatorSignature& sig, PsiFn psi, PhiFn phi,
                       Eigen::VectorXd center, double A) {
    Homotopy hom;
    hom.A = A;
    hom.center = std::move(center);
    hom.target_psi = std::move(psi);
    hom.target_phi = std::move(phi);
    // Exactly the value the discrete interior residual sees at the start
    // iterate, so the t = 0 stage converges immediately.
    SymMatrix h0(sig.n);
    for (int i = 0; i < sig.n; ++i) h0.set(i, i, A);
    hom.psi0 = F_value(h0, sig);
    return hom;
}

void continuation_march(const SystemFactory& make_system, Eigen::VectorXd& u,
                        const NewtonOptions& opts, SolveReport& rep) {
    validate_options(opts);
    {
        const auto sys = make_system(0.0);
        const NewtonOutcome o = newton_damped(*sys, u, opts);
        rep.continuation.push_back({0.0, o.iterations});
        rep.iterations += o.iterations;
        rep.residual_interior = o.residual_interior;
        rep.residual_boundary = o.residual_boundary;
        if (!o.converged) {
            rep.failure = "continuation failed at t = 0: " + o.failure;
            return;
        }
    }
    double t = 0.0;
    double dt = opts.t_step0;
    int streak = 0;
    while (t < 1.0) {
        const double t_try = std::min(1.0, t + dt);
        const auto sys = make_system(t_try);
        Eigen::VectorXd u_try = u;
        const NewtonOutcome o = newton_damped(*sys, u_try, opts);
        if (o.converged) {
            t = t_try;
            u = u_try;
            rep.continuation.push_back({t, o.iterations});
            rep.iterations += o.iterations;
            rep.residual_interior = o.residual_interior;
            rep.residual_boundary = o.residual_boundary;
            if (++streak >= 2) {
                dt *= 2.0;
                streak = 0;
            }
        } else {
            streak = 0;
            dt *= 0.5;
            if (dt < opts.t_step_floor) {
                std::ostringstream msg;
                msg << "continuation stalled at t = " << t
                    << " (step below floor); last Newton failure: " << o.failure;
                rep.failure = msg.str();
                return;
            }
        }
    }
    rep.converged = true;
}

}  // namespace detail

NewtonOutcome newton_damped(const DiscreteSystem& sys, Eigen::VectorXd& u,
                            const NewtonOptions& opts) {
    detail::validate_options(opts);
    NewtonOutcome out;
    Eigen::VectorXd r = sys.residual(u);  // precondition faults propagate
    const double tol_int = opts.tol_r * sys.interior_scale(u);
    const double tol_bd = opts.tol_b;

    for (int iter = 0;; ++iter) {
        sys.residual_norms(r, out.residual_interior, out.residual_boundary);
        if (out.residual_interior <= tol_int && out.residual_boundary <= tol_bd) {
            out.converged = true;
            return out;
        }
        if (iter >= opts.max_iter) {
            out.failure = "no convergence within " + std::to_string(opts.max_iter) +
                          " Newton iterations";
            return out;
        }

        const Eigen::SparseMatrix<double> jac = sys.jacobian(u);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) {
            out.failure = "linear solver: factorization failed";
            return out;
        }
        Eigen::VectorXd d = lu.solve(-r);
        if (lu.info() != Eigen::Success || !d.allFinite()) {
            out.failure = "linear solver: back substitution failed";
            return out;
        }
        // 1e-10 relative residual contract, with one refinement attempt
        const double rnorm = r.norm();
        double lin_res = (jac * d + r).norm();
        if (lin_res > 1e-10 * rnorm) {
            d += lu.solve(-(jac * d + r));
            lin_res = (jac * d + r).norm();
            if (lin_res > 1e-10 * rnorm) {
                std::ostringstream msg;
                msg << "linear solver: relative residual " << lin_res / rnorm
                    << " misses the 1e-10 contract";
                out.failure = msg.str();
                return out;
            }
        }

        const double rn = r.lpNorm<Eigen::Infinity>();
        double step = 1.0;
        bool accepted = false;
        int margin_rejects = 0, decrease_rejects = 0, domain_rejects = 0;
        while (step >= opts.min_step) {
            const Eigen::VectorXd u_try = u + step * d;
            if (!u_try.allFinite()) {
                ++domain_rejects;
                step *= 0.5;
                continue;
            }
            if (!(sys.margin(u_try) >= opts.margin)) {
                ++margin_rejects;
                step *= 0.5;
                continue;
            }
            Eigen::VectorXd r_try;
            try {
                r_try = sys.residual(u_try);
            } catch (const Error&) {
                ++domain_rejects;
                step *= 0.5;
                continue;
            }
            if (r_try.lpNorm<Eigen::Infinity>() < rn) {
                u = u_try;
                r = std::move(r_try);
                accepted = true;
                ++out.iterations;
                break;
            }
            ++decrease_rejects;
            step *= 0.5;
        }
        if (!accepted) {
            std::ostringstream msg;
            if (margin_rejects > 0 && margin_rejects >= decrease_rejects)
                msg << "admissibility collapse: every trial step broke the margin";
            else
                msg << "line-search stall: no residual decrease above the minimum step";
            msg << " (margin rejects " << margin_rejects << ", decrease rejects "
                << decrease_rejects << ", domain rejects " << domain_rejects << ")";
            out.failure = msg.str();
            return out;
        }
    }
}

BoxSystem::BoxSystem(std::shared_ptr<const RectGrid> grid, OperatorSignature sig,
                     PsiFn psi, PhiFn phi)
    : grid_(std::move(grid)), sig_(sig), psi_(std::move(psi)), phi_(std::move(phi)) {
    if (!grid_) throw InvalidInputError("BoxSystem: null grid");
    if (grid_->n() != sig_.n)
        throw InvalidInputError("BoxSystem: grid dimension does not match signature");
    if (!psi_ || !phi_) throw InvalidInputError("BoxSystem: null callback");
    nodes_.resize(static_cast<std::size_t>(grid_->node_count()));
    for (long v = 0; v < grid_->node_count(); ++v) {
        NodeInfo& nd = nodes_[static_cast<std::size_t>(v)];
        nd.idx = grid_->unflat(v);
        nd.x = grid_->coords(nd.idx);
        nd.boundary = grid_->is_boundary(nd.idx);
        if (nd.boundary) nd.normal = grid_->outward_normal(nd.idx);
    }
}

long BoxSystem::size() const { return grid_->node_count(); }

Eigen::VectorXd BoxSystem::residual(const Eigen::VectorXd& u) const {
    if (u.size() != size())
        throw InvalidInputError("BoxSystem: iterate size mismatch");
    const Field f(grid_, u);
    Eigen::VectorXd r(size());
    for (long v = 0; v < size(); ++v) {
        const NodeInfo& nd = nodes_[static_cast<std::size_t>(v)];
        if (!nd.boundary) {
            const SymMatrix h = hessian_at(f, v);
            if (!is_admissible(h, sig_))
                throw AdmissibilityError("inadmissible Hessian at node " +
                                         node_label(v, nd.idx));
            const Eigen::VectorXd g = gradient_at(f, v);
            r[v] = F_value(h, sig_) - psi_(nd.x, u[v], g).value;
        } else {
            double un = 0.0;
            for (int a = 0; a < grid_->n(); ++a) {
                if (nd.normal[a] == 0.0) continue;
                un += nd.normal[a] *
                      apply_stencil(first_diff_stencil(*grid_, nd.idx, a), u);
            }
            r[v] = un - phi_(nd.x, u[v], nd.normal).value;
        }
    }
    return r;
}

Eigen::SparseMatrix<double> BoxSystem::jacobian(const Eigen::VectorXd& u) const {
    if (u.size() != size())
        throw InvalidInputError("BoxSystem: iterate size mismatch");
    const Field f(grid_, u);
    const int n = grid_->n();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(size()) * (9 * n * n + 4));
    for (long v = 0; v < size(); ++v) {
        const NodeInfo& nd = nodes_[static_cast<std::size_t>(v)];
        if (!nd.boundary) {
            const SymMatrix h = hessian_at(f, v);
            const SymMatrix fg = F_gradient(h, sig_);
            const Eigen::VectorXd g = gradient_at(f, v);
            const PsiEval pe = psi_(nd.x, u[v], g);
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b) {
                    // packed Hessian coordinates: off-diagonal entries enter twice
                    const double coef = (a == b) ? fg(a, a) : 2.0 * fg(a, b);
                    for (const auto& e : second_diff_stencil(*grid_, nd.idx, a, b))
                        trips.emplace_back(static_cast<int>(v),
                                           static_cast<int>(e.node),
                                           coef * e.weight);
                }
            trips.emplace_back(static_cast<int>(v), static_cast<int>(v), -pe.d_u);
            for (int a = 0; a < n; ++a) {
                const double dpa = pe.d_p.size() > 0 ? pe.d_p[a] : 0.0;
                if (dpa == 0.0) continue;
                for (const auto& e : first_diff_stencil(*grid_, nd.idx, a))
                    trips.emplace_back(static_cast<int>(v), static_cast<int>(e.node),
                                       -dpa * e.weight);
            }
        } else {
            for (int a = 0; a < n; ++a) {
                if (nd.normal[a] == 0.0) continue;
                for (const auto& e : first_diff_stencil(*grid_, nd.idx, a))
                    trips.emplace_back(static_cast<int>(v), static_cast<int>(e.node),
                                       nd.normal[a] * e.weight);
            }
            trips.emplace_back(static_cast<int>(v), static_cast<int>(v),
                               -phi_(nd.x, u[v], nd.normal).d_u);
        }
    }
    Eigen::SparseMatrix<double> jac(static_cast<int>(size()), static_cast<int>(size()));
    jac.setFromTriplets(trips.begin(), trips.end());
    jac.makeCompressed();
    return jac;
}

double BoxSystem::margin(const Eigen::VectorXd& u) const {
    // Interior nodes only: the operator is evaluated nowhere else, and the
    // one-sided Hessian estimate at a boundary node is not part of any
    // equation row.
    const Field f(grid_, u);
    double m = std::numeric_limits<double>::infinity();
    for (long v = 0; v < size(); ++v) {
        if (nodes_[static_cast<std::size_t>(v)].boundary) continue;
        m = std::min(m, admissibility_margin(hessian_at(f, v), sig_));
    }
    return m;
}

double BoxSystem::interior_scale(const Eigen::VectorXd& u) const {
    const Field f(grid_, u);
    double s = 0.0;
    for (long v = 0; v < size(); ++v) {
        const NodeInfo& nd = nodes_[static_cast<std::size_t>(v)];
        if (nd.boundary) continue;
        s = std::max(s, std::abs(psi_(nd.x, u[v], gradient_at(f, v)).value));
    }
    return 1.0 + s;
}

void BoxSystem::residual_norms(const Eigen::VectorXd& r, double& interior,
                               double& boundary) const {
    interior = boundary = 0.0;
    for (long v = 0; v < size(); ++v) {
        double& slot = nodes_[static_cast<std::size_t>(v)].boundary ? boundary : interior;
        slot = std::max(slot, std::abs(r[v]));
    }
}

namespace {

void check_box_matches_grid(const ProblemSpec& prob, const RectGrid& grid) {
    const auto* box = std::get_if<BoxDomain>(&prob.domain);
    if (!box)
        throw InvalidInputError("ball domains are solved by radial_solve");
    for (int a = 0; a < grid.n(); ++a) {
        const double scale = 1.0 + std::abs(box->hi[a]) + std::abs(box->lo[a]);
        if (std::abs(grid.lo()[a] - box->lo[a]) > 1e-9 * scale ||
            std::abs(grid.hi()[a] - box->hi[a]) > 1e-9 * scale)
            throw InvalidInputError("field grid does not cover the problem domain");
    }
}

BoxSystem system_for(const ProblemSpec& prob,
                     const std::shared_ptr<const RectGrid>& grid) {
    check_box_matches_grid(prob, *grid);
    return {grid, prob.sig, psi_from_ast(prob.psi_tilde), phi_from_ast(prob.phi)};
}

}  // namespace

Field residual(const Field& field, const ProblemSpec& prob) {
    const BoxSystem sys = system_for(prob, field.grid);
    return {field.grid, sys.residual(field.values)};
}

Eigen::SparseMatrix<double> jacobian(const Field& field, const ProblemSpec& prob) {
    const BoxSystem sys = system_for(prob, field.grid);
    return sys.jacobian(field.values);
}

void fill_field_stats(const Field& field, const OperatorSignature& sig,
                      SolveReport& report) {
    const long count = field.grid->node_count();
    double umin = field.values.minCoeff();
    double umax = field.values.maxCoeff();
    report.sup_u = std::max(std::abs(umin), std::abs(umax));
    report.osc_u = umax - umin;
    report.sup_grad = 0.0;
    report.sup_hess = 0.0;
    report.admissibility_margin = std::numeric_limits<double>::infinity();
    for (long v = 0; v < count; ++v) {
        report.sup_grad = std::max(report.sup_grad, gradient_at(field, v).norm());
        const SymMatrix h = hessian_at(field, v);
        const Eigen::VectorXd ev = eigen_sym(h).values;
        report.sup_hess = std::max(report.sup_hess, ev.cwiseAbs().maxCoeff());
        if (!field.grid->is_boundary(field.grid->unflat(v)))
            report.admissibility_margin =
                std::min(report.admissibility_margin, admissibility_margin(h, sig));
    }
}

std::pair<Field, SolveReport> newton_solve(const ProblemSpec& prob,
                                           const Field& init,
                                           const NewtonOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const BoxSystem sys = system_for(prob, init.grid);
    Eigen::VectorXd u = init.values;
    const NewtonOutcome o = newton_damped(sys, u, opts);
    Field out(init.grid, std::move(u));
    SolveReport rep;
    rep.converged = o.converged;
    rep.failure = o.failure;
    rep.iterations = o.iterations;
    rep.residual_interior = o.residual_interior;
    rep.residual_boundary = o.residual_boundary;
    fill_field_stats(out, prob.sig, rep);
    rep.seconds = elapsed_seconds(start);
    return {std::move(out), rep};
}

std::pair<Field, SolveReport> continuation_solve_fn(
    std::shared_ptr<const RectGrid> grid, const OperatorSignature& sig,
    const PsiFn& psi, const PhiFn& phi, const NewtonOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    detail::validate_options(opts);
    const detail::Homotopy hom =
        detail::make_homotopy(sig, psi, phi, 0.5 * (grid->lo() + grid->hi()), opts.A0);

    Eigen::VectorXd u(grid->node_count());
    for (long v = 0; v < grid->node_count(); ++v)
        u[v] = hom.u0_at(grid->coords(grid->unflat(v)));

    const detail::SystemFactory factory = [&](double t) {
        return std::make_unique<BoxSystem>(grid, sig, hom.psi_at(t), hom.phi_at(t));
    };
    SolveReport rep;
    detail::continuation_march(factory, u, opts, rep);
    Field out(grid, std::move(u));
    fill_field_stats(out, sig, rep);
    rep.seconds = elapsed_seconds(start);
    return {std::move(out), rep};
}

std::pair<Field, SolveReport> continuation_solve(const ProblemSpec& prob,
                                                 const std::vector<int>& dims,
                                                 const NewtonOptions& opts) {
    const auto* box = std::get_if<BoxDomain>(&prob.domain);
    if (!box)
        throw InvalidInputError("ball domains are solved by radial_solve");
    auto grid = std::make_shared<RectGrid>(box->lo, box->hi, dims);
    return continuation_solve_fn(std::move(grid), prob.sig,
                                 psi_from_ast(prob.psi_tilde),
                                 phi_from_ast(prob.phi), opts);
}

}  // namespace hq
