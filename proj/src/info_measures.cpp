#include "infoflow/info_measures.hpp"

#include "infoflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace infoflow {

double shannon_entropy(const SimplexPoint& p) {
    double h = 0.0;
    for (double v : p.values())
        if (v > zero_probability)
            h -= v * std::log(v);
    return h;
}

double kl_to_stationary(const SimplexPoint& p, const SimplexPoint& pi) {
    double d = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(pi[i] > 0.0))
            fail(ErrorKind::domain, "relative entropy needs a strictly positive reference distribution");
        if (p[i] > zero_probability)
            d += p[i] * std::log(p[i] / pi[i]);
    }
    // Rounding can leave a tiny negative value at p == pi.
    return std::max(d, 0.0);
}

OvershootResult entropy_overshoot(const ProbTrajectory& traj) {
    if (traj.size() < 2)
        fail(ErrorKind::domain, "entropy overshoot needs at least two samples");
    std::vector<double> h(traj.size());
    std::transform(traj.states.begin(), traj.states.end(), h.begin(),
                   [](const SimplexPoint& p) { return shannon_entropy(p); });

    const double top = *std::max_element(h.begin(), h.end());
    std::size_t at = 0;
    while (h[at] < top - overshoot_tie_tolerance)
        ++at;

    OvershootResult r;
    r.h_max = h[at];
    r.t_max = traj.times[at];
    r.h_min_after = *std::min_element(h.begin() + static_cast<std::ptrdiff_t>(at), h.end());
    r.delta_h = r.h_max - r.h_min_after;
    return r;
}

Trajectory entropy_series(const ProbTrajectory& traj) {
    Trajectory out;
    out.times = traj.times;
    out.values.reserve(traj.size());
    for (const auto& p : traj.states)
        out.values.push_back(shannon_entropy(p));
    return out;
}

Trajectory kl_series(const ProbTrajectory& traj, const SimplexPoint& pi, KlSign sign) {
    Trajectory out;
    out.times = traj.times;
    out.values.reserve(traj.size());
    const double s = sign == KlSign::positive ? 1.0 : -1.0;
    for (const auto& p : traj.states)
        out.values.push_back(s * kl_to_stationary(p, pi));
    return out;
}

} // namespace infoflow
