#include "infoflow/types.hpp"

#include "infoflow/errors.hpp"

#include <cmath>
#include <sstream>

namespace infoflow {

void Trajectory::validate() const {
    if (times.size() != values.size()) {
        std::ostringstream os;
        os << "trajectory has " << times.size() << " times but " << values.size() << " values";
        fail(ErrorKind::domain, os.str());
    }
    if (times.size() < 2)
        fail(ErrorKind::domain, "trajectory needs at least two samples");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            std::ostringstream os;
            os << "trajectory times must be strictly increasing (index " << i << ": " << times[i - 1]
               << " -> " << times[i] << ")";
            fail(ErrorKind::domain, os.str());
        }
    }
    for (double v : values)
        if (!std::isfinite(v))
            fail(ErrorKind::domain, "trajectory values must be finite");
}

SimplexPoint::SimplexPoint(double p1, double p2, double p3) : p_{p1, p2, p3} {
    for (double v : p_) {
        if (!(v >= 0.0)) {
            std::ostringstream os;
            os << "simplex entries must be >= 0, got (" << p1 << ", " << p2 << ", " << p3 << ")";
            fail(ErrorKind::domain, os.str());
        }
    }
    const double s = p1 + p2 + p3;
    if (std::abs(s - 1.0) > sum_tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "simplex entries must sum to 1, got " << s;
        fail(ErrorKind::domain, os.str());
    }
}

SimplexPoint SimplexPoint::from_propagated(const std::array<double, 3>& p, bool* clipped,
                                           double clip_tolerance, double sum_drift) {
    std::array<double, 3> q = p;
    bool clip = false;
    for (double& v : q) {
        if (!std::isfinite(v) || v < -clip_tolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "propagated state left the simplex: (" << p[0] << ", " << p[1] << ", " << p[2] << ")";
            fail(ErrorKind::numerical, os.str());
        }
        if (v < 0.0) {
            v = 0.0;
            clip = true;
        }
    }
    const double s = q[0] + q[1] + q[2];
    if (std::abs(s - 1.0) > sum_drift) {
        std::ostringstream os;
        os.precision(17);
        os << "propagated state lost normalization: sum = " << s;
        fail(ErrorKind::numerical, os.str());
    }
    if (std::abs(s - 1.0) > 0.5 * sum_tolerance)
        for (double& v : q)
            v /= s;
    if (clipped)
        *clipped = clip;
    SimplexPoint out;
    out.p_ = q;
    return out;
}

Trajectory ProbTrajectory::component(std::size_t i) const {
    Trajectory out;
    out.times = times;
    out.values.reserve(states.size());
    for (const auto& s : states)
        out.values.push_back(s[i]);
    return out;
}

void ProbTrajectory::validate() const {
    if (times.size() != states.size())
        fail(ErrorKind::domain, "probability trajectory has mismatched lengths");
    if (!standard_errors.empty() && standard_errors.size() != states.size())
        fail(ErrorKind::domain, "standard errors must match the number of samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            fail(ErrorKind::domain, "probability trajectory times must be strictly increasing");
    for (const auto& s : states) {
        const double sum = s[0] + s[1] + s[2];
        if (std::abs(sum - 1.0) > 1e-8)
            fail(ErrorKind::numerical, "probability trajectory is not normalized");
    }
}

std::vector<double> uniform_grid(double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        fail(ErrorKind::domain, "horizon must be positive and finite");
    if (steps < 1)
        fail(ErrorKind::domain, "grid needs at least one step");
    std::vector<double> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        grid[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    return grid;
}

} // namespace infoflow
