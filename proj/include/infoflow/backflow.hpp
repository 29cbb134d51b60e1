// backflow.hpp: positive-slope interval detection and the backflow functional
//
// N_I = sum over maximal rising intervals of [I(t_end) - I(t_start)], evaluated
// on sampled data as the telescoped sum of increments inside each run.

#pragma once

#include "infoflow/types.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace infoflow {

struct RiseInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    double rise = 0.0;
    std::size_t i_start = 0; // sample indices
    std::size_t i_end = 0;
};

struct BackflowResult {
    double n_i = 0.0;
    std::vector<RiseInterval> intervals;
    double epsilon = 0.0;
    // Sum of -dI over every increment outside the kept intervals, so that
    // I(last) - I(first) = n_i - total_fall.
    double total_fall = 0.0;
};

// Relative tolerance (times max|I|) below which an increment counts as flat.
inline constexpr double flat_relative_tolerance = 1e-12;

BackflowResult backflow_functional(std::span<const double> times, std::span<const double> values,
                                   double epsilon = 0.0);
BackflowResult backflow_functional(const Trajectory& traj, double epsilon = 0.0);

std::vector<std::pair<double, double>> positive_intervals(const Trajectory& traj,
                                                          double epsilon = 0.0);

} // namespace infoflow
