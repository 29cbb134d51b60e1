// io.hpp: CSV, JSON and SVG serialization
//
// Numbers are written with %.17g so every double round-trips exactly.

#pragma once

#include "infoflow/backflow.hpp"
#include "infoflow/classical.hpp"
#include "infoflow/sweeps.hpp"
#include "infoflow/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace infoflow::io {

std::string format_number(double x);

// Throws Error(io) with the path on failure. Creates parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// Header "t,<value_name>".
std::string trajectory_csv(const Trajectory& traj, std::string_view value_name = "I");
// Header "t,p1,p2,p3" plus "se1,se2,se3" for Monte Carlo trajectories.
std::string prob_trajectory_csv(const ProbTrajectory& traj);

// First row: "<axis1>\<axis2>" followed by the axis2 values. Each further row:
// an axis1 value followed by the cell values; masked cells are empty fields.
std::string phase_grid_csv(const PhaseGrid& grid);
PhaseGrid read_phase_grid_csv(std::string_view text);

// Meta plus axes, shape and mask, enough to rebuild the grid with the CSV.
nlohmann::json phase_grid_json(const PhaseGrid& grid);

nlohmann::json backflow_json(const BackflowResult& result);

// Two numeric columns (t, I); a non-numeric first line is taken as a header,
// blank lines and lines starting with '#' are skipped.
Trajectory read_trajectory_csv(std::string_view text);

// Three rows of three numbers, K(i, j) = rate j -> i, columns summing to zero.
// '#' starts a comment; commas or whitespace separate entries.
Matrix3 parse_generator(std::string_view text);

// "a,b,c" -> simplex point.
SimplexPoint parse_simplex_point(std::string_view text);

// Heatmap with one rect per cell, axis labels and a colorbar (linear scale).
std::string svg_heatmap(const PhaseGrid& grid, std::string_view title);

} // namespace infoflow::io
