#include "infoflow/sweeps.hpp"

#include "infoflow/backflow.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/info_measures.hpp"
#include "infoflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infoflow {

Axis linear_axis(std::string name, double lo, double hi, std::size_t n) {
    if (n == 0)
        fail(ErrorKind::domain, "axis '" + name + "' needs at least one value");
    Axis a{std::move(name), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i)
        a.values[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1)
        a.values.back() = hi;
    return a;
}

PhaseGrid::PhaseGrid(Axis a1, Axis a2)
    : axis1(std::move(a1)), axis2(std::move(a2)), values(axis1.size() * axis2.size(), 0.0) {}

double PhaseGrid::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j)
            if (is_valid(i, j))
                m = std::max(m, at(i, j));
    return m;
}

void PhaseGrid::validate() const {
    if (values.size() != rows() * cols())
        fail(ErrorKind::domain, "phase grid values do not match its axes");
    if (!valid.empty() && valid.size() != values.size())
        fail(ErrorKind::domain, "phase grid mask does not match its axes");
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j)
            if (is_valid(i, j) && !std::isfinite(at(i, j))) {
                std::ostringstream os;
                os << "phase grid cell (" << i << ", " << j << ") is not finite";
                fail(ErrorKind::numerical, os.str());
            }
}

SimplexGrid SimplexGrid::build(std::size_t resolution, bool include_boundary) {
    if (resolution < 1)
        fail(ErrorKind::domain, "simplex resolution must be >= 1");
    SimplexGrid g;
    g.resolution = resolution;
    g.include_boundary = include_boundary;
    const double n = static_cast<double>(resolution);
    for (std::size_t i = 0; i <= resolution; ++i) {
        for (std::size_t j = 0; i + j <= resolution; ++j) {
            const std::size_t k = resolution - i - j;
            if (!include_boundary && (i == 0 || j == 0 || k == 0))
                continue;
            g.points.push_back({i, j, k,
                                SimplexPoint(static_cast<double>(i) / n, static_cast<double>(j) / n,
                                             static_cast<double>(k) / n)});
        }
    }
    return g;
}

PhaseGrid quantum_phase_diagram(const QuantumSweepConfig& config) {
    for (double a : config.alpha.values)
        if (!(a > 0.0 && a <= 1.0))
            fail(ErrorKind::domain, "alpha values must lie in (0, 1]");
    for (double r : config.ratio.values)
        if (!(r >= 0.0) || !std::isfinite(r))
            fail(ErrorKind::domain, "omega/lambda values must be >= 0");

    PhaseGrid grid(config.alpha, config.ratio);
    const std::size_t cols = grid.cols();
    parallel_for(
        grid.values.size(),
        [&](std::size_t cell) {
            const std::size_t i = cell / cols;
            const std::size_t j = cell % cols;
            const QuantumParams p{grid.axis1.values[i], 1.0, grid.axis2.values[j]};
            try {
                grid.values[cell] = n_qe(p, config.horizon, config.points_per_period);
            } catch (const Error& e) {
                std::ostringstream os;
                os << "cell alpha=" << p.alpha << " omega/lambda=" << p.omega << ": " << e.what();
                throw Error(e.kind(), os.str());
            }
        },
        config.workers);

    grid.meta = {
        {"model", "quantum"},
        {"observable", "n_qe"},
        {"lambda", 1.0},
        {"horizon", config.horizon},
        {"points_per_period", config.points_per_period},
        {"grid", {grid.rows(), grid.cols()}},
    };
    grid.validate();
    return grid;
}

std::string_view to_string(Metric metric) noexcept {
    switch (metric) {
    case Metric::delta_h: return "delta_h";
    case Metric::n_h: return "n_h";
    case Metric::n_dkl: return "n_dkl";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    if (name == "delta_h") return Metric::delta_h;
    if (name == "n_h") return Metric::n_h;
    if (name == "n_dkl") return Metric::n_dkl;
    fail(ErrorKind::usage, "unknown metric '" + std::string(name) + "' (expected delta_h, n_h or n_dkl)");
}

double pooled_standard_error(const ProbTrajectory& traj, Metric metric, const SimplexPoint& pi) {
    if (!traj.has_standard_errors())
        return 0.0;
    // Var(sum g_i p_i) = (sum g_i^2 p_i - (sum g_i p_i)^2) / n for multinomial
    // frequencies; n is recovered from p(1-p)/se^2 on a component with 0 < p < 1.
    double sum_var = 0.0;
    std::size_t used = 0;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const auto& p = traj.states[s];
        const auto& se = traj.standard_errors[s];
        double n = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            if (p[i] > 0.0 && p[i] < 1.0 && se[i] > 0.0) {
                n = p[i] * (1.0 - p[i]) / (se[i] * se[i]);
                break;
            }
        ++used;
        if (n == 0.0)
            continue;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            if (p[i] <= zero_probability)
                continue;
            const double g = metric == Metric::n_dkl ? std::log(p[i] / pi[i]) : std::log(p[i]);
            m1 += g * p[i];
            m2 += g * g * p[i];
        }
        sum_var += std::max(0.0, m2 - m1 * m1) / n;
    }
    return used == 0 ? 0.0 : std::sqrt(sum_var / static_cast<double>(used));
}

double trajectory_metric(const ProbTrajectory& traj, Metric metric, const SimplexPoint& pi, double epsilon) {
    if (metric == Metric::delta_h)
        return entropy_overshoot(traj).delta_h;
    if (epsilon < 0.0)
        epsilon = monte_carlo_epsilon_factor * pooled_standard_error(traj, metric, pi);
    const Trajectory series = metric == Metric::n_h ? entropy_series(traj) : kl_series(traj, pi);
    return backflow_functional(series, epsilon).n_i;
}

namespace {

void check_simplex_config(const SimplexMapConfig& c) {
    c.memory.validate();
    if (c.resolution < 4)
        fail(ErrorKind::domain, "simplex resolution must be >= 4");
    if (!(c.horizon > 0.0) || c.steps < 1)
        fail(ErrorKind::domain, "simplex map needs a positive horizon and at least one step");
}

SimplexPoint lattice_point(std::size_t i, std::size_t j, std::size_t n) {
    const double d = static_cast<double>(n);
    return SimplexPoint(static_cast<double>(i) / d, static_cast<double>(j) / d,
                        static_cast<double>(n - i - j) / d);
}

bool in_lattice(std::size_t i, std::size_t j, std::size_t n, bool boundary) {
    if (i + j > n)
        return false;
    return boundary || (i > 0 && j > 0 && i + j < n);
}

double monte_carlo_cell(const Generator3& gen, const SimplexMapConfig& c, std::size_t i, std::size_t j,
                        const std::vector<double>& grid) {
    const ProbTrajectory traj = erlang2_monte_carlo(gen, lattice_point(i, j, c.resolution), grid,
                                                    c.memory.n_traj, derive_seed(c.memory.seed, i, j), 1);
    return trajectory_metric(traj, c.metric, gen.pi(), c.epsilon);
}

double deterministic_epsilon(double epsilon) { return epsilon < 0.0 ? 0.0 : epsilon; }

nlohmann::json generator_json(const Generator3& gen) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
        rows.push_back({gen.rates()(i, 0), gen.rates()(i, 1), gen.rates()(i, 2)});
    return rows;
}

nlohmann::json memory_json(const MemoryConfig& m) {
    nlohmann::json j = {{"kind", std::string(to_string(m.kind))}};
    switch (m.kind) {
    case MemoryKind::gme_exponential: j["gamma"] = m.gamma; break;
    case MemoryKind::fractional: j["alpha"] = m.alpha; break;
    case MemoryKind::erlang2_embedded: j["phase_start"] = std::string(to_string(m.phase_start)); break;
    case MemoryKind::erlang2_montecarlo:
        j["n_traj"] = m.n_traj;
        j["seed"] = m.seed;
        j["cell_seed"] = "derive_seed(seed, i, j)";
        break;
    case MemoryKind::markov: break;
    }
    return j;
}

} // namespace

double simplex_cell(const Generator3& gen, const SimplexMapConfig& c, std::size_t i, std::size_t j) {
    check_simplex_config(c);
    if (!in_lattice(i, j, c.resolution, c.include_boundary))
        fail(ErrorKind::domain, "cell is outside the simplex lattice");
    const std::vector<double> grid = uniform_grid(c.horizon, c.steps);
    if (c.memory.stochastic())
        return monte_carlo_cell(gen, c, i, j, grid);
    const Propagator prop(gen, c.memory, grid);
    return trajectory_metric(prop.apply(lattice_point(i, j, c.resolution)), c.metric, gen.pi(),
                             deterministic_epsilon(c.epsilon));
}

PhaseGrid simplex_map(const Generator3& gen, const SimplexMapConfig& c) {
    check_simplex_config(c);
    const std::size_t n = c.resolution;
    PhaseGrid grid(linear_axis("p1", 0.0, 1.0, n + 1), linear_axis("p2", 0.0, 1.0, n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        grid.axis1.values[i] = static_cast<double>(i) / static_cast<double>(n);
        grid.axis2.values[i] = grid.axis1.values[i];
    }
    grid.valid.assign(grid.values.size(), 0);
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j)
            if (in_lattice(i, j, n, c.include_boundary)) {
                grid.valid[grid.index(i, j)] = 1;
                cells.push_back(grid.index(i, j));
            }

    const std::vector<double> times = uniform_grid(c.horizon, c.steps);
    std::optional<Propagator> prop;
    if (!c.memory.stochastic())
        prop.emplace(gen, c.memory, times);

    parallel_for(
        cells.size(),
        [&](std::size_t k) {
            const std::size_t cell = cells[k];
            const std::size_t i = cell / (n + 1);
            const std::size_t j = cell % (n + 1);
            try {
                if (prop)
                    grid.values[cell] = trajectory_metric(prop->apply(lattice_point(i, j, n)), c.metric,
                                                          gen.pi(), deterministic_epsilon(c.epsilon));
                else
                    grid.values[cell] = monte_carlo_cell(gen, c, i, j, times);
            } catch (const Error& e) {
                std::ostringstream os;
                os << "cell p0=(" << i << "/" << n << ", " << j << "/" << n << ", " << n - i - j << "/" << n
                   << "): " << e.what();
                throw Error(e.kind(), os.str());
            }
        },
        c.workers);

    grid.meta = {
        {"model", "classical"},
        {"memory", memory_json(c.memory)},
        {"metric", std::string(to_string(c.metric))},
        {"resolution", n},
        {"include_boundary", c.include_boundary},
        {"horizon", c.horizon},
        {"steps", c.steps},
        {"generator", generator_json(gen)},
        {"grid", {grid.rows(), grid.cols()}},
    };
    if (c.epsilon >= 0.0)
        grid.meta["epsilon"] = c.epsilon;
    else if (c.memory.stochastic())
        grid.meta["epsilon"] = "3x pooled standard error";
    else
        grid.meta["epsilon"] = 0.0;
    grid.validate();
    return grid;
}

AlphaSweep classical_alpha_sweep(const Generator3& gen, const AlphaSweepConfig& c) {
    if (c.alpha.values.empty() || c.initial_states.empty() || c.horizons.empty())
        fail(ErrorKind::domain, "alpha sweep needs alphas, initial states and horizons");
    for (double a : c.alpha.values)
        if (!(a > 0.0 && a <= 1.0))
            fail(ErrorKind::domain, "alpha values must lie in (0, 1]");
    for (std::size_t h = 0; h < c.horizons.size(); ++h)
        if (!(c.horizons[h] > 0.0) || (h > 0 && !(c.horizons[h] > c.horizons[h - 1])))
            fail(ErrorKind::domain, "horizons must be positive and increasing");
    if (c.steps < 1)
        fail(ErrorKind::domain, "alpha sweep needs at least one step");
    relaxation_modes(gen); // spectrum check before any work

    const std::size_t na = c.alpha.size();
    const std::size_t nh = c.horizons.size();
    const std::size_t np = c.initial_states.size();
    Axis horizon_axis{"horizon", c.horizons};
    Axis state_axis{"initial_state", {}};
    for (std::size_t s = 0; s < np; ++s)
        state_axis.values.push_back(static_cast<double>(s));

    AlphaSweep out;
    out.growth.assign(np, PhaseGrid(c.alpha, horizon_axis));
    parallel_for(
        na * nh,
        [&](std::size_t cell) {
            const std::size_t a = cell / nh;
            const std::size_t h = cell % nh;
            MemoryConfig m;
            m.kind = MemoryKind::fractional;
            m.alpha = c.alpha.values[a];
            const Propagator prop(gen, m, uniform_grid(c.horizons[h], c.steps));
            for (std::size_t s = 0; s < np; ++s)
                out.growth[s].at(a, h) = trajectory_metric(prop.apply(c.initial_states[s]), c.metric, gen.pi(), 0.0);
        },
        c.workers);

    nlohmann::json states = nlohmann::json::array();
    for (const auto& p : c.initial_states)
        states.push_back({p[0], p[1], p[2]});
    nlohmann::json meta = {
        {"model", "classical"},
        {"memory", {{"kind", "fractional"}}},
        {"metric", std::string(to_string(c.metric))},
        {"horizons", c.horizons},
        {"steps", c.steps},
        {"epsilon", 0.0},
        {"initial_states", states},
        {"generator", generator_json(gen)},
    };

    out.metric = PhaseGrid(c.alpha, state_axis);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t s = 0; s < np; ++s)
            out.metric.at(a, s) = out.growth[s].at(a, nh - 1);
    out.metric.meta = meta;
    out.metric.meta["horizon"] = c.horizons.back();
    for (std::size_t s = 0; s < np; ++s) {
        out.growth[s].meta = meta;
        out.growth[s].meta["initial_state"] = states[s];
        out.growth[s].validate();
    }
    out.metric.validate();
    return out;
}

std::optional<Decline> steepest_decline(const std::vector<double>& x, const std::vector<double>& y, double tol) {
    if (x.size() != y.size() || x.size() < 2)
        fail(ErrorKind::domain, "profile needs at least two matching samples");
    std::optional<Decline> best;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double dy = y[i + 1] - y[i];
        if (!(dy < -tol))
            continue;
        const double slope = dy / (x[i + 1] - x[i]);
        if (!best || slope < best->slope)
            best = Decline{0.5 * (x[i] + x[i + 1]), slope};
    }
    return best;
}

std::string_view to_string(BoundaryMode mode) noexcept {
    return mode == BoundaryMode::gradient ? "gradient" : "level";
}

BoundaryMode parse_boundary_mode(std::string_view name) {
    if (name == "gradient") return BoundaryMode::gradient;
    if (name == "level") return BoundaryMode::level;
    fail(ErrorKind::usage, "unknown boundary mode '" + std::string(name) + "' (expected gradient or level)");
}

std::vector<BoundaryPoint> boundary_extract(const PhaseGrid& grid, BoundaryMode mode, double level_fraction) {
    grid.validate();
    if (grid.rows() < 2)
        fail(ErrorKind::domain, "boundary extraction needs at least two axis1 values");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < grid.rows(); ++i)
        for (std::size_t j = 0; j < grid.cols(); ++j)
            if (grid.is_valid(i, j)) {
                lo = std::min(lo, grid.at(i, j));
                hi = std::max(hi, grid.at(i, j));
            }
    if (!(hi > lo))
        fail(ErrorKind::degenerate, "grid is constant; no boundary to extract");

    const auto& a = grid.axis1.values;
    std::vector<BoundaryPoint> out;
    if (mode == BoundaryMode::gradient) {
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < grid.rows(); ++i)
                if (grid.is_valid(i, j))
                    rows.push_back(i);
            if (rows.size() < 2)
                continue;
            BoundaryPoint best{grid.axis2.values[j], a[rows[0]], -1.0};
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const std::size_t l = rows[k == 0 ? 0 : k - 1];
                const std::size_t r = rows[k + 1 == rows.size() ? k : k + 1];
                const double g = std::abs((grid.at(r, j) - grid.at(l, j)) / (a[r] - a[l]));
                if (g > best.gradient) {
                    best.axis1 = a[rows[k]];
                    best.gradient = g;
                }
            }
            out.push_back(best);
        }
        return out;
    }

    if (!(level_fraction > 0.0 && level_fraction < 1.0))
        fail(ErrorKind::domain, "level fraction must lie in (0, 1)");
    const double level = level_fraction * hi;
    for (std::size_t j = 0; j < grid.cols(); ++j) {
        for (std::size_t i = 0; i + 1 < grid.rows(); ++i) {
            if (!grid.is_valid(i, j) || !grid.is_valid(i + 1, j))
                continue;
            const double v0 = grid.at(i, j) - level;
            const double v1 = grid.at(i + 1, j) - level;
            if (v0 == 0.0) {
                out.push_back({grid.axis2.values[j], a[i], 0.0});
            } else if ((v0 < 0.0) != (v1 < 0.0) && v1 != 0.0) {
                const double f = v0 / (v0 - v1);
                out.push_back({grid.axis2.values[j], a[i] + f * (a[i + 1] - a[i]),
                               std::abs((v1 - v0) / (a[i + 1] - a[i]))});
            }
        }
        const std::size_t last = grid.rows() - 1;
        if (grid.is_valid(last, j) && grid.at(last, j) == level)
            out.push_back({grid.axis2.values[j], a[last], 0.0});
    }
    return out;
}

} // namespace infoflow
