// info_measures.hpp: entropy and relative entropy on the simplex (nats)

#pragma once

#include "infoflow/types.hpp"

#include <array>

namespace infoflow {

// Probabilities below this are treated as exactly zero (0 ln 0 = 0).
inline constexpr double zero_probability = 1e-15;

double shannon_entropy(const SimplexPoint& p);

// D_KL(p || pi). Throws Error(domain) if any pi_i == 0.
double kl_to_stationary(const SimplexPoint& p, const SimplexPoint& pi);

struct OvershootResult {
    double h_max = 0.0;
    double t_max = 0.0;
    double h_min_after = 0.0;
    double delta_h = 0.0;
};

// Absolute tolerance used to pick the earliest sample attaining max H.
inline constexpr double overshoot_tie_tolerance = 1e-12;

OvershootResult entropy_overshoot(const ProbTrajectory& traj);

// Sign convention for the KL observable: I = +D_KL (default) or I = -D_KL.
enum class KlSign { positive, negative };

Trajectory entropy_series(const ProbTrajectory& traj);
Trajectory kl_series(const ProbTrajectory& traj, const SimplexPoint& pi,
                     KlSign sign = KlSign::positive);

// Nats to bits.
inline double to_bits(double nats) { return nats / 0.69314718055994530942; }

} // namespace infoflow
