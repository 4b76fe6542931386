#include "hq/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hq {

namespace {

std::string real17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json vec_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json problem_json(const ProblemSpec& prob) {
    json out;
    out["n"] = prob.sig.n;
    out["p"] = prob.sig.p;
    out["k"] = prob.sig.k;
    out["l"] = prob.sig.l;
    if (const auto* box = std::get_if<BoxDomain>(&prob.domain)) {
        out["domain"] = {{"kind", "box"},
                         {"lo", vec_json(box->lo)},
                         {"hi", vec_json(box->hi)}};
    } else {
        const auto& ball = std::get<BallDomain>(prob.domain);
        out["domain"] = {{"kind", "ball"},
                         {"center", vec_json(ball.center)},
                         {"radius", ball.radius}};
    }
    out["psi_tilde"] = prob.psi_tilde.pretty();
    out["phi"] = prob.phi.pretty();
    out["structural"] = {{"c0", optional_json(prob.structural.c0)},
                         {"alpha0", optional_json(prob.structural.alpha0)},
                         {"gamma", optional_json(prob.structural.gamma)},
                         {"C1", optional_json(prob.structural.C1)},
                         {"M1", optional_json(prob.structural.M1)}};
    return out;
}

json solve_json(const SolveReport& report) {
    json out;
    out["converged"] = report.converged;
    out["failure"] = report.failure;
    out["iterations"] = report.iterations;
    out["residual_interior"] = report.residual_interior;
    out["residual_boundary"] = report.residual_boundary;
    out["admissibility_margin"] = report.admissibility_margin;
    json steps = json::array();
    for (const auto& step : report.continuation)
        steps.push_back({{"t", step.t}, {"newton_iterations", step.newton_iterations}});
    out["continuation"] = std::move(steps);
    out["sup_u"] = report.sup_u;
    out["osc_u"] = report.osc_u;
    out["sup_grad"] = report.sup_grad;
    out["sup_hess"] = report.sup_hess;
    return out;
}

json structural_json(const StructuralReport& report) {
    json out;
    out["c0_measured"] = report.c0_measured;
    out["c0_ok"] = report.c0_ok;
    out["c0_argmin"] = {{"x", vec_json(report.c0_argmin_x)},
                        {"u", report.c0_argmin_u}};
    out["alpha0_measured"] = report.alpha0_measured;
    out["alpha0_ok"] = report.alpha0_ok;
    out["alpha0_argmin"] = {{"x", vec_json(report.alpha0_argmin_x)},
                            {"u", report.alpha0_argmin_u}};
    out["samples"] = report.sample_description;
    return out;
}

json growth_json(const GrowthReport& report) {
    json out;
    out["gamma"] = report.gamma;
    out["C1"] = report.C1;
    out["M1"] = report.M1;
    out["measured_sup"] = report.measured_sup;
    out["ok"] = report.ok;
    out["samples"] = report.sample_description;
    return out;
}

json bounds_json(const BoundReport& report) {
    json out;
    out["osc_u"] = report.osc_u;
    out["sup_grad"] = report.sup_grad;
    out["sup_hess"] = report.sup_hess;
    out["interior_grad_at_center"] = report.interior_grad_at_center;
    out["ratio"] = report.ratio;
    out["c0_bound"] = {{"applicable", report.c0_bound_applicable},
                       {"ok", report.c0_bound_ok},
                       {"lhs", report.c0_bound_lhs},
                       {"rhs", report.c0_bound_rhs}};
    return out;
}

std::string field_csv(const Field& field) {
    const RectGrid& grid = *field.grid;
    const int n = grid.n();

    auto join_reals = [](const Eigen::VectorXd& v) {
        std::string s;
        for (long i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += real17(v[i]);
        }
        return s;
    };

    std::string out = "# grid n=" + std::to_string(n) + " dims=";
    for (int a = 0; a < n; ++a) {
        if (a) out += ',';
        out += std::to_string(grid.dims()[static_cast<std::size_t>(a)]);
    }
    out += " origin=" + join_reals(grid.lo());
    out += " spacing=" + join_reals(grid.spacing());
    out += '\n';

    for (long node = 0; node < grid.node_count(); ++node) {
        const std::vector<int> idx = grid.unflat(node);
        const Eigen::VectorXd x = grid.coords(idx);
        for (int a = 0; a < n; ++a) {
            out += std::to_string(idx[static_cast<std::size_t>(a)]);
            out += ',';
        }
        out += join_reals(x);
        out += ',';
        out += real17(field.values[node]);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write `" + path + "`");
    out << content;
    if (!out) throw ConfigError("write failed for `" + path + "`");
}

}  // namespace hq
