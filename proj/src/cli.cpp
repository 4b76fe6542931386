#include "hq/cli.hpp"

#include <filesystem>
#include <iostream>

#include "hq/config.hpp"
#include "hq/radial.hpp"
#include "hq/report_io.hpp"

namespace hq::cli {

namespace {

bool is_ball(const RunConfig& cfg) {
    return std::holds_alternative<BallDomain>(cfg.problem.domain);
}

std::pair<Field, SolveReport> solve_once(const RunConfig& cfg,
                                         const std::vector<int>& dims,
                                         int radial_nodes) {
    if (is_ball(cfg)) return radial_solve(cfg.problem, radial_nodes, cfg.newton);
    return continuation_solve(cfg.problem, dims, cfg.newton);
}

/// Solve failures surface two ways: a report with converged = false, or an
/// exception from a state no backtracking can leave. Both become a failed
/// report here so the caller has one path.
std::pair<std::optional<Field>, SolveReport> guarded_solve(
    const RunConfig& cfg, const std::vector<int>& dims, int radial_nodes) {
    try {
        auto [field, report] = solve_once(cfg, dims, radial_nodes);
        return {std::move(field), std::move(report)};
    } catch (const Error& e) {
        SolveReport report;
        report.converged = false;
        report.failure = e.what();
        return {std::nullopt, std::move(report)};
    }
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output.dir) / name).string();
}

void emit_outputs(const RunConfig& cfg, const json& report,
                  const std::optional<Field>& field, bool quiet) {
    if (cfg.output.emit_report) {
        write_text_file(out_path(cfg, "report.json"), report.dump(2) + "\n");
        if (!quiet)
            std::cout << "wrote " << out_path(cfg, "report.json") << "\n";
    }
    if (cfg.output.emit_field && field) {
        write_text_file(out_path(cfg, "field.csv"), field_csv(*field));
        if (!quiet)
            std::cout << "wrote " << out_path(cfg, "field.csv") << "\n";
    }
}

json report_head(const std::string& command, const RunConfig& cfg) {
    json report;
    report["schema"] = 1;
    report["command"] = command;
    report["seed"] = cfg.sampler.seed;
    report["problem"] = problem_json(cfg.problem);
    return report;
}

void describe(const SolveReport& sr, const std::string& label, bool quiet) {
    if (quiet) return;
    if (sr.converged) {
        std::cout << label << ": converged in " << sr.iterations
                  << " Newton steps, residuals " << sr.residual_interior
                  << " (interior) / " << sr.residual_boundary << " (boundary)\n";
    } else {
        std::cout << label << ": FAILED: " << sr.failure << "\n";
    }
}

int run_solve(const RunConfig& cfg, bool quiet) {
    auto [field, sr] = guarded_solve(cfg, cfg.dims, cfg.radial_nodes);

    json report = report_head("solve", cfg);
    report["solve"] = solve_json(sr);
    if (sr.converged && field) {
        const BoundReport bounds = verify_solution(cfg.problem, *field, sr);
        report["bounds"] = bounds_json(bounds);
    }

    emit_outputs(cfg, report, sr.converged ? field : std::nullopt, quiet);
    describe(sr, "solve", quiet);
    return sr.converged ? 0 : 2;
}

int run_verify(const RunConfig& cfg, bool quiet) {
    json report = report_head("verify", cfg);
    report["structural"] = structural_json(check_structural(cfg.problem, cfg.sampler));
    const auto& sc = cfg.problem.structural;
    if (sc.gamma && sc.C1 && sc.M1)
        report["growth"] = growth_json(check_growth(cfg.problem, cfg.sampler));
    else
        report["growth"] = nullptr;

    emit_outputs(cfg, report, std::nullopt, quiet);
    if (!quiet) {
        const auto& s = report["structural"];
        std::cout << "verify: c0_ok=" << s["c0_ok"] << " alpha0_ok=" << s["alpha0_ok"]
                  << "\n";
    }
    return 0;
}

int run_sweep(const RunConfig& cfg, bool quiet) {
    if (cfg.sweep.empty())
        throw ConfigError("sweep needs solver.sweep (a list of node counts)");

    json report = report_head("sweep", cfg);
    json levels = json::array();
    std::vector<double> ratios;
    std::optional<Field> finest;
    bool all_converged = true;

    const int n = cfg.problem.sig.n;
    for (const int m : cfg.sweep) {
        std::vector<int> dims(static_cast<std::size_t>(n), m);
        auto [field, sr] = guarded_solve(cfg, dims, m);

        json level;
        level["nodes"] = m;
        level["solve"] = solve_json(sr);
        if (sr.converged && field) {
            const BoundReport bounds = verify_solution(cfg.problem, *field, sr);
            level["bounds"] = bounds_json(bounds);
            ratios.push_back(bounds.ratio);
            finest = field;
        } else {
            all_converged = false;
        }
        levels.push_back(std::move(level));
        describe(sr, "sweep m=" + std::to_string(m), quiet);
    }

    report["sweep"] = std::move(levels);
    json rj = json::array();
    for (const double r : ratios) rj.push_back(r);
    report["ratios"] = std::move(rj);
    report["ratios_stable"] = ratios_stable(ratios);

    emit_outputs(cfg, report, finest, quiet);
    return all_converged ? 0 : 2;
}

}  // namespace

int run(const std::string& subcommand, const std::string& config_path,
        const CliFlags& flags) {
    try {
        RunConfig cfg = load_config(config_path);
        if (flags.out_dir) cfg.output.dir = *flags.out_dir;
        if (flags.seed) cfg.sampler.seed = *flags.seed;

        if (subcommand == "solve") return run_solve(cfg, flags.quiet);
        if (subcommand == "verify") return run_verify(cfg, flags.quiet);
        if (subcommand == "sweep") return run_sweep(cfg, flags.quiet);
        std::cerr << "error: unknown subcommand `" << subcommand << "`\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hq::cli
