// quantum.hpp: fractional two-state revival observable
//
//   b(t) = 1/4 * E_a(-(lambda t)^a)^2 * sin^2(omega t)
//
// and its integrated revival measure N_qe(T): the sum of every rise of b on
// [0, T]. The integral over [0, inf) diverges for a < 1/2, so N_qe is always
// reported at an explicit horizon.

#pragma once

#include "infoflow/mittag_leffler.hpp"
#include "infoflow/types.hpp"

#include <cstddef>
#include <vector>

namespace infoflow {

struct QuantumParams {
    double alpha = 1.0;
    double lambda = 1.0;
    double omega = 0.0;

    void validate() const;
};

inline constexpr std::size_t default_points_per_period = 64;
inline constexpr std::size_t min_points_per_period = 16;
inline constexpr std::size_t default_grid_cap = 100'000'000;
// Default horizon in units of 1/lambda.
inline constexpr double default_horizon_lambda = 200.0;

class QuantumModel {
public:
    explicit QuantumModel(const QuantumParams& params, double ml_tol = ml::default_tolerance);

    const QuantumParams& params() const noexcept { return params_; }

    double envelope(double t) const;
    double operator()(double t) const;

    // Finite-difference derivative of the envelope.
    double envelope_slope(double t) const;

    // A function with the same zeros as db/dt away from the zeros of sin(omega t):
    //   E'(t) sin(omega t) + omega E(t) cos(omega t).
    double stationarity(double t) const;

    double fd_step() const noexcept { return h_; }

private:
    QuantumParams params_;
    ml::MittagLeffler ml_;
    double h_;
};

double b_qe(const QuantumParams& params, double t);

// Number of grid intervals used for [0, horizon].
std::size_t quantum_grid_intervals(const QuantumParams& params, double horizon,
                                   std::size_t points_per_period);

Trajectory sample_bqe(const QuantumParams& params, double horizon,
                      std::size_t points_per_period = default_points_per_period,
                      std::size_t grid_cap = default_grid_cap);

struct NqeResult {
    double value = 0.0;
    double horizon = 0.0;
    std::size_t grid_points = 0;
    std::size_t points_per_period = 0;
    std::size_t intervals = 0;      // rising intervals on the grid
    std::size_t refined = 0;        // extrema moved off the grid by root finding
    std::size_t exact_minima = 0;   // minima pinned to a zero of sin(omega t)
    double grid_value = 0.0;        // unrefined sum of rises
};

NqeResult n_qe_detailed(const QuantumParams& params, double horizon,
                        std::size_t points_per_period = default_points_per_period,
                        std::size_t grid_cap = default_grid_cap);

double n_qe(const QuantumParams& params, double horizon,
            std::size_t points_per_period = default_points_per_period,
            std::size_t grid_cap = default_grid_cap);

// log N_qe(T) = intercept + slope * log T, least squares over the given horizons.
struct HorizonScaling {
    std::vector<double> horizons;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;
};

HorizonScaling horizon_scaling(const QuantumParams& params, const std::vector<double>& horizons,
                               std::size_t points_per_period = default_points_per_period,
                               std::size_t grid_cap = default_grid_cap);

// n log-spaced horizons spanning [t_lo, t_hi].
std::vector<double> log_spaced(double t_lo, double t_hi, std::size_t n);

} // namespace infoflow
