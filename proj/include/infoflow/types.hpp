#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace infoflow {

// Sampled scalar observable I(t).
struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const noexcept { return times.size(); }

    // Throws Error(domain) unless times are strictly increasing, lengths
    // match, and there are at least two samples.
    void validate() const;
};

// Probability vector on the 3-simplex.
class SimplexPoint {
public:
    static constexpr double sum_tolerance = 1e-12;

    SimplexPoint() = default;
    SimplexPoint(double p1, double p2, double p3);
    explicit SimplexPoint(const std::array<double, 3>& p) : SimplexPoint(p[0], p[1], p[2]) {}

    double operator[](std::size_t i) const noexcept { return p_[i]; }
    const std::array<double, 3>& values() const noexcept { return p_; }

    // Clips entries in [-clip_tolerance, 0) to zero and renormalizes; anything
    // more negative, or a sum off by more than sum_drift, is a numerical error.
    // Returns whether a clip happened.
    static SimplexPoint from_propagated(const std::array<double, 3>& p, bool* clipped = nullptr,
                                        double clip_tolerance = 1e-10, double sum_drift = 1e-8);

    friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

private:
    std::array<double, 3> p_{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

// Sampled path p(t) on the simplex. standard_errors is empty for deterministic
// propagators and holds one entry per sample for Monte Carlo estimates.
struct ProbTrajectory {
    std::vector<double> times;
    std::vector<SimplexPoint> states;
    std::vector<std::array<double, 3>> standard_errors;
    std::size_t clipped = 0;

    std::size_t size() const noexcept { return times.size(); }
    bool has_standard_errors() const noexcept { return !standard_errors.empty(); }

    // Per-component series p_i(t).
    Trajectory component(std::size_t i) const;

    void validate() const;
};

std::vector<double> uniform_grid(double horizon, std::size_t steps);

} // namespace infoflow
