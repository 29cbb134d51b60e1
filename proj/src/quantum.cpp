#include "infoflow/quantum.hpp"

#include "infoflow/backflow.hpp"
#include "infoflow/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infoflow {

namespace {

constexpr double two_pi = boost::math::constants::two_pi<double>();
constexpr double pi = boost::math::constants::pi<double>();

void check_sampling(double horizon, std::size_t ppp) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        fail(ErrorKind::domain, "horizon must be positive and finite");
    if (ppp < min_points_per_period) {
        std::ostringstream os;
        os << "points per period must be >= " << min_points_per_period << ", got " << ppp;
        fail(ErrorKind::domain, os.str());
    }
}

double grid_time(double horizon, std::size_t i, std::size_t n) {
    return horizon * static_cast<double>(i) / static_cast<double>(n);
}

} // namespace

void QuantumParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "alpha must lie in (0, 1], got " << alpha;
        fail(ErrorKind::domain, os.str());
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        std::ostringstream os;
        os << "lambda must be positive, got " << lambda;
        fail(ErrorKind::domain, os.str());
    }
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        std::ostringstream os;
        os << "omega must be >= 0, got " << omega;
        fail(ErrorKind::domain, os.str());
    }
}

QuantumModel::QuantumModel(const QuantumParams& params, double ml_tol)
    : params_((params.validate(), params)), ml_(params.alpha, ml_tol) {
    const double inv = params.omega > 0.0 ? std::min(1.0 / params.lambda, 1.0 / params.omega)
                                          : 1.0 / params.lambda;
    h_ = 1e-6 * inv;
}

double QuantumModel::envelope(double t) const {
    if (!(t >= 0.0))
        fail(ErrorKind::domain, "time must be >= 0");
    if (t == 0.0)
        return 1.0;
    return ml_(std::pow(params_.lambda * t, params_.alpha));
}

double QuantumModel::operator()(double t) const {
    if (params_.omega == 0.0) {
        if (!(t >= 0.0))
            fail(ErrorKind::domain, "time must be >= 0");
        return 0.0;
    }
    const double e = envelope(t);
    const double s = std::sin(params_.omega * t);
    return 0.25 * e * e * s * s;
}

double QuantumModel::envelope_slope(double t) const {
    if (t < h_)
        return (envelope(t + h_) - envelope(t)) / h_;
    return (envelope(t + h_) - envelope(t - h_)) / (2.0 * h_);
}

double QuantumModel::stationarity(double t) const {
    const double w = params_.omega;
    return envelope_slope(t) * std::sin(w * t) + w * envelope(t) * std::cos(w * t);
}

double b_qe(const QuantumParams& params, double t) {
    return QuantumModel(params)(t);
}

std::size_t quantum_grid_intervals(const QuantumParams& params, double horizon,
                                   std::size_t points_per_period) {
    check_sampling(horizon, points_per_period);
    double n = 0.0;
    if (params.omega > 0.0)
        n = std::max(1024.0, std::ceil(static_cast<double>(points_per_period) * params.omega * horizon / two_pi));
    else
        n = std::max(1024.0, std::ceil(horizon * params.lambda * 64.0));
    if (!std::isfinite(n) || n > 1e18)
        fail(ErrorKind::resource, "sampling grid size overflows");
    return static_cast<std::size_t>(n);
}

namespace {

std::size_t checked_intervals(const QuantumParams& params, double horizon, std::size_t ppp,
                              std::size_t cap) {
    params.validate();
    const std::size_t n = quantum_grid_intervals(params, horizon, ppp);
    if (n + 1 > cap) {
        std::ostringstream os;
        os << "sampling grid needs " << n + 1 << " points, above the cap of " << cap;
        fail(ErrorKind::resource, os.str());
    }
    return n;
}

} // namespace

Trajectory sample_bqe(const QuantumParams& params, double horizon, std::size_t points_per_period,
                      std::size_t grid_cap) {
    const std::size_t n = checked_intervals(params, horizon, points_per_period, grid_cap);
    const QuantumModel model(params);
    Trajectory out;
    out.times.resize(n + 1);
    out.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = grid_time(horizon, i, n);
        out.times[i] = t;
        out.values[i] = model(t);
    }
    return out;
}

namespace {

struct Extremum {
    double value;
    bool moved;
    bool exact_zero;
};

// Root of the stationarity function inside [lo, hi], if it changes sign there.
bool stationary_point(const QuantumModel& model, double lo, double hi, double& root) {
    const double flo = model.stationarity(lo);
    const double fhi = model.stationarity(hi);
    if (flo == 0.0) {
        root = lo;
        return true;
    }
    if (fhi == 0.0) {
        root = hi;
        return true;
    }
    if ((flo > 0.0) == (fhi > 0.0))
        return false;
    std::uintmax_t iters = 100;
    auto f = [&](double t) { return model.stationarity(t); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(32), iters);
    root = 0.5 * (r.first + r.second);
    return true;
}

Extremum refine_minimum(const QuantumModel& model, const Trajectory& traj, std::size_t i) {
    const double grid = traj.values[i];
    if (i == 0 || i + 1 == traj.size())
        return {grid, false, false};
    const double lo = traj.times[i - 1];
    const double hi = traj.times[i + 1];
    const double w = model.params().omega;
    const double zero = std::ceil(w * lo / pi) * pi / w;
    if (zero <= hi)
        return {0.0, grid != 0.0, true};
    double t = 0.0;
    if (stationary_point(model, lo, hi, t)) {
        const double v = model(t);
        if (v < grid)
            return {v, true, false};
    }
    return {grid, false, false};
}

Extremum refine_maximum(const QuantumModel& model, const Trajectory& traj, std::size_t i) {
    const double grid = traj.values[i];
    if (i == 0 || i + 1 == traj.size())
        return {grid, false, false};
    double t = 0.0;
    if (stationary_point(model, traj.times[i - 1], traj.times[i + 1], t)) {
        const double v = model(t);
        if (v > grid)
            return {v, true, false};
    }
    return {grid, false, false};
}

} // namespace

NqeResult n_qe_detailed(const QuantumParams& params, double horizon, std::size_t points_per_period,
                        std::size_t grid_cap) {
    const std::size_t n = checked_intervals(params, horizon, points_per_period, grid_cap);
    NqeResult out;
    out.horizon = horizon;
    out.grid_points = n + 1;
    out.points_per_period = points_per_period;
    if (params.omega == 0.0)
        return out;

    const QuantumModel model(params);
    const Trajectory traj = sample_bqe(params, horizon, points_per_period, grid_cap);
    const BackflowResult grid = backflow_functional(traj, 0.0);
    out.intervals = grid.intervals.size();
    out.grid_value = grid.n_i;

    double total = 0.0;
    for (const auto& iv : grid.intervals) {
        const Extremum lo = refine_minimum(model, traj, iv.i_start);
        const Extremum hi = refine_maximum(model, traj, iv.i_end);
        out.refined += static_cast<std::size_t>(lo.moved) + static_cast<std::size_t>(hi.moved);
        out.exact_minima += static_cast<std::size_t>(lo.exact_zero);
        total += hi.value - lo.value;
    }
    out.value = total;
    return out;
}

double n_qe(const QuantumParams& params, double horizon, std::size_t points_per_period,
            std::size_t grid_cap) {
    return n_qe_detailed(params, horizon, points_per_period, grid_cap).value;
}

HorizonScaling horizon_scaling(const QuantumParams& params, const std::vector<double>& horizons,
                               std::size_t points_per_period, std::size_t grid_cap) {
    if (horizons.size() < 2)
        fail(ErrorKind::domain, "horizon scaling needs at least two horizons");
    HorizonScaling out;
    out.horizons = horizons;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double t : horizons) {
        const double v = n_qe(params, t, points_per_period, grid_cap);
        if (!(v > 0.0))
            fail(ErrorKind::degenerate, "horizon scaling needs a positive revival measure at every horizon");
        out.values.push_back(v);
        const double x = std::log(t);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(horizons.size());
    const double den = m * sxx - sx * sx;
    if (!(den > 0.0))
        fail(ErrorKind::degenerate, "horizons must not all coincide");
    out.slope = (m * sxy - sx * sy) / den;
    out.intercept = (sy - out.slope * sx) / m;
    return out;
}

std::vector<double> log_spaced(double t_lo, double t_hi, std::size_t n) {
    if (!(t_lo > 0.0 && t_hi > t_lo) || n < 2)
        fail(ErrorKind::domain, "log spacing needs 0 < lo < hi and at least two points");
    std::vector<double> out(n);
    const double a = std::log(t_lo);
    const double b = std::log(t_hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = t_lo;
    out.back() = t_hi;
    return out;
}

} // namespace infoflow
