#pragma once

#include <string>
#include <vector>

#include "hq/estimates.hpp"
#include "hq/problem.hpp"
#include "hq/solver.hpp"

namespace hq {

struct OutputConfig {
    std::string dir = ".";
    bool emit_field = true;
    bool emit_report = true;
};

/// Everything a batch run needs: the problem, grid resolutions, solver and
/// sampler knobs, output destinations.
struct RunConfig {
    ProblemSpec problem;
    std::vector<int> dims;   // box grids: nodes per axis
    int radial_nodes = 33;   // ball profiles: 1-D node count
    std::vector<int> sweep;  // refinement sequence (uniform nodes per axis)
    NewtonOptions newton;
    SamplerConfig sampler;
    OutputConfig output;
};

/// Parses the line-based `section.key = value` format. '#' starts a comment,
/// expressions are double-quoted, list values are whitespace-separated.
/// Unknown keys are rejected; the resulting problem is validated.
[[nodiscard]] RunConfig parse_config(const std::string& text);

[[nodiscard]] RunConfig load_config(const std::string& path);

}  // namespace hq
