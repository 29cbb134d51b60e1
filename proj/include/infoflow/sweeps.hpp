// sweeps.hpp: phase diagrams over parameter planes and the probability simplex

#pragma once

#include "infoflow/classical.hpp"
#include "infoflow/quantum.hpp"
#include "infoflow/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infoflow {

struct Axis {
    std::string name;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

// n evenly spaced values from lo to hi inclusive (n == 1 gives {lo}).
Axis linear_axis(std::string name, double lo, double hi, std::size_t n);

// Values over axis1 x axis2, stored row-major (axis1 index major). Cells
// outside the domain (the upper triangle of a barycentric map) are masked out
// and hold 0.
struct PhaseGrid {
    Axis axis1;
    Axis axis2;
    std::vector<double> values;
    std::vector<std::uint8_t> valid; // empty means every cell is valid
    nlohmann::json meta = nlohmann::json::object();

    PhaseGrid() = default;
    PhaseGrid(Axis a1, Axis a2);

    std::size_t rows() const noexcept { return axis1.size(); }
    std::size_t cols() const noexcept { return axis2.size(); }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * axis2.size() + j; }
    double at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
    double& at(std::size_t i, std::size_t j) { return values[index(i, j)]; }
    bool is_valid(std::size_t i, std::size_t j) const {
        return valid.empty() || valid[index(i, j)] != 0;
    }

    double max_value() const;
    // Throws Error(domain) on shape mismatch or non-finite valid cells.
    void validate() const;
};

struct LatticePoint {
    std::size_t i = 0, j = 0, k = 0; // i + j + k == resolution
    SimplexPoint p;
};

struct SimplexGrid {
    std::size_t resolution = 0;
    bool include_boundary = true;
    std::vector<LatticePoint> points;

    static SimplexGrid build(std::size_t resolution, bool include_boundary = true);
};

struct QuantumSweepConfig {
    Axis alpha = linear_axis("alpha", 0.1, 1.0, 33);
    Axis ratio = linear_axis("omega_over_lambda", 0.5, 20.0, 33);
    double horizon = default_horizon_lambda; // units of 1/lambda
    std::size_t points_per_period = default_points_per_period;
    std::size_t workers = 0;
};

// Cell (i, j) = N_qe(alpha_i, lambda = 1, omega = ratio_j, horizon).
PhaseGrid quantum_phase_diagram(const QuantumSweepConfig& config);

enum class Metric { delta_h, n_h, n_dkl };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view name);

// Pooled standard error of the metric's observable along a Monte Carlo
// trajectory: the root-mean-square of the per-sample multinomial standard
// errors of H or D_KL.
double pooled_standard_error(const ProbTrajectory& traj, Metric metric, const SimplexPoint& pi);

inline constexpr double monte_carlo_epsilon_factor = 3.0;

// Metric of one trajectory. epsilon < 0 selects the default: 0 for
// deterministic paths, 3x pooled standard error for Monte Carlo paths.
double trajectory_metric(const ProbTrajectory& traj, Metric metric, const SimplexPoint& pi,
                         double epsilon = -1.0);

struct SimplexMapConfig {
    MemoryConfig memory;
    Metric metric = Metric::delta_h;
    std::size_t resolution = 40;
    double horizon = 10.0;
    std::size_t steps = 1000;
    double epsilon = -1.0;
    bool include_boundary = true;
    std::size_t workers = 0;
};

// Barycentric map: axis1 = p1 = i/n, axis2 = p2 = j/n, p3 = 1 - p1 - p2.
PhaseGrid simplex_map(const Generator3& gen, const SimplexMapConfig& config);

// Metric for a single lattice cell, identical to the value the map stores.
double simplex_cell(const Generator3& gen, const SimplexMapConfig& config, std::size_t i, std::size_t j);

struct AlphaSweepConfig {
    Axis alpha = linear_axis("alpha", 0.3, 1.0, 8);
    std::vector<SimplexPoint> initial_states{SimplexPoint(1.0, 0.0, 0.0)};
    Metric metric = Metric::n_dkl;
    std::vector<double> horizons{10.0, 100.0, 1000.0};
    std::size_t steps = 20000; // per horizon
    std::size_t workers = 0;
};

struct AlphaSweep {
    // alpha x initial state, at the largest horizon.
    PhaseGrid metric;
    // One grid per initial state: alpha x horizon.
    std::vector<PhaseGrid> growth;
};

AlphaSweep classical_alpha_sweep(const Generator3& gen, const AlphaSweepConfig& config);

// Location of the most negative finite-difference slope of a profile, reported
// as the midpoint of the steepest segment. Empty when no segment decreases by
// more than tol.
struct Decline {
    double location = 0.0;
    double slope = 0.0;
};
std::optional<Decline> steepest_decline(const std::vector<double>& x, const std::vector<double>& y,
                                        double tol = 1e-12);

enum class BoundaryMode { gradient, level };

std::string_view to_string(BoundaryMode mode) noexcept;
BoundaryMode parse_boundary_mode(std::string_view name);

struct BoundaryPoint {
    double axis2 = 0.0;
    double axis1 = 0.0;
    // Gradient mode: |dvalue/daxis1| at the located point.
    double gradient = 0.0;
};

// Gradient mode: one point per axis2 column at the axis1 location of maximal
// |slope| (central differences inside, one-sided at the ends). Level mode:
// every linear-interpolated crossing of level_fraction * max along axis1.
std::vector<BoundaryPoint> boundary_extract(const PhaseGrid& grid, BoundaryMode mode,
                                            double level_fraction = 0.5);

} // namespace infoflow
