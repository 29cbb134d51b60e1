#include "infoflow/backflow.hpp"

#include "infoflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infoflow {

namespace {

void check_samples(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size())
        fail(ErrorKind::domain, "trajectory times and values differ in length");
    if (times.size() < 2)
        fail(ErrorKind::domain, "trajectory needs at least two samples");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            std::ostringstream os;
            os << "trajectory times must be strictly increasing at index " << i;
            fail(ErrorKind::domain, os.str());
        }
    }
    for (double v : values)
        if (!std::isfinite(v))
            fail(ErrorKind::domain, "trajectory values must be finite");
}

} // namespace

BackflowResult backflow_functional(std::span<const double> times, std::span<const double> values,
                                   double epsilon) {
    if (!(epsilon >= 0.0))
        fail(ErrorKind::domain, "backflow threshold epsilon must be >= 0");
    check_samples(times, values);

    double scale = 0.0;
    for (double v : values)
        scale = std::max(scale, std::abs(v));
    const double flat = flat_relative_tolerance * scale;

    BackflowResult out;
    out.epsilon = epsilon;

    const std::size_t n = values.size();
    bool in_run = false;
    std::size_t run_start = 0;
    std::size_t run_end = 0; // last sample reached by a strict rise
    std::size_t consumed = 0; // increments before this index are accounted for

    auto add_fall = [&](std::size_t from, std::size_t to) {
        for (std::size_t k = from; k < to; ++k)
            out.total_fall -= values[k + 1] - values[k];
    };
    auto close_run = [&]() {
        const double rise = values[run_end] - values[run_start];
        if (rise > epsilon && rise > 0.0) {
            add_fall(consumed, run_start);
            out.intervals.push_back({times[run_start], times[run_end], rise, run_start, run_end});
            out.n_i += rise;
            consumed = run_end;
        }
        in_run = false;
    };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double d = values[k + 1] - values[k];
        if (d > flat) {
            if (!in_run) {
                in_run = true;
                run_start = k;
            }
            run_end = k + 1;
        } else if (d < -flat && in_run) {
            close_run();
        }
    }
    if (in_run)
        close_run();
    add_fall(consumed, n - 1);
    return out;
}

BackflowResult backflow_functional(const Trajectory& traj, double epsilon) {
    return backflow_functional(std::span<const double>(traj.times), std::span<const double>(traj.values),
                               epsilon);
}

std::vector<std::pair<double, double>> positive_intervals(const Trajectory& traj, double epsilon) {
    const BackflowResult r = backflow_functional(traj, epsilon);
    std::vector<std::pair<double, double>> out;
    out.reserve(r.intervals.size());
    for (const auto& iv : r.intervals)
        out.emplace_back(iv.t_start, iv.t_end);
    return out;
}

} // namespace infoflow
