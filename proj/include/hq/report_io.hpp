#pragma once

// JSON report fragments and the CSV field format. Wall-clock timings never
// enter the JSON: a fixed config and seed must produce byte-identical
// reports.

#include <json.hpp>
#include <string>

#include "hq/estimates.hpp"
#include "hq/grid.hpp"
#include "hq/problem.hpp"
#include "hq/solver.hpp"

namespace hq {

using json = nlohmann::ordered_json;

[[nodiscard]] json problem_json(const ProblemSpec& prob);
[[nodiscard]] json solve_json(const SolveReport& report);
[[nodiscard]] json structural_json(const StructuralReport& report);
[[nodiscard]] json growth_json(const GrowthReport& report);
[[nodiscard]] json bounds_json(const BoundReport& report);

/// One header line describing the grid, then one row per node in flat node
/// order (axis 0 fastest): `i1,...,in,x1,...,xn,u` with 0-based indices.
[[nodiscard]] std::string field_csv(const Field& field);

/// Writes content to path, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hq
