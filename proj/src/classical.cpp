#include "infoflow/classical.hpp"

#include "infoflow/errors.hpp"
#include "infoflow/mittag_leffler.hpp"
#include "infoflow/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

namespace infoflow {

void validate_rates(const Matrix3& k) {
    for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (!std::isfinite(k(i, j)))
                fail(ErrorKind::domain, "generator entries must be finite");
            if (i != j && k(i, j) < 0.0) {
                std::ostringstream os;
                os << "generator rate K(" << i + 1 << "," << j + 1 << ") is negative: " << k(i, j);
                fail(ErrorKind::domain, os.str());
            }
            sum += k(i, j);
        }
        if (std::abs(sum) > column_sum_tolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "generator column " << j + 1 << " sums to " << sum
               << " (columns must sum to zero; K(i,j) is the rate j -> i)";
            fail(ErrorKind::domain, os.str());
        }
    }
}

bool is_irreducible(const Matrix3& k) {
    // Reachability by repeated squaring of the adjacency relation.
    std::array<std::array<bool, 3>, 3> reach{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            reach[i][j] = i == j || k(j, i) > 0.0; // i -> j
    for (int m = 0; m < 3; ++m)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                reach[i][j] = reach[i][j] || (reach[i][m] && reach[m][j]);
    for (const auto& row : reach)
        for (bool r : row)
            if (!r)
                return false;
    return true;
}

Vector3 stationary(const Matrix3& k) {
    validate_rates(k);
    if (!is_irreducible(k))
        fail(ErrorKind::degenerate, "generator is reducible: stationary distribution is not unique");
    Eigen::FullPivLU<Matrix3> lu(k);
    lu.setThreshold(1e-12);
    if (lu.rank() != 2)
        fail(ErrorKind::degenerate, "generator null space is not one-dimensional");
    // Replace one balance equation by the normalization.
    Matrix3 a = k;
    a.row(2).setOnes();
    const Vector3 rhs(0.0, 0.0, 1.0);
    Vector3 pi = a.fullPivLu().solve(rhs);
    for (int i = 0; i < 3; ++i)
        if (!(pi(i) > 0.0))
            fail(ErrorKind::degenerate, "stationary distribution has a non-positive entry");
    pi /= pi.sum();
    return pi;
}

Generator3::Generator3(const Matrix3& rates) : k_(rates) {
    const Vector3 p = stationary(k_);
    if ((k_ * p).cwiseAbs().maxCoeff() > stationarity_tolerance)
        fail(ErrorKind::numerical, "stationary vector does not annihilate the generator");
    pi_ = SimplexPoint::from_propagated({p(0), p(1), p(2)});
    for (int i = 0; i < 3; ++i) {
        double r = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != i)
                r += k_(j, i);
        exit_[static_cast<std::size_t>(i)] = r;
    }
}

double Generator3::norm1() const {
    return k_.cwiseAbs().colwise().sum().maxCoeff();
}

Generator3 Generator3::desk_default() {
    Matrix3 k;
    k << -1.25, 2.0, 0.5,
          1.0, -3.0, 1.0,
          0.25, 1.0, -1.5;
    return Generator3(k);
}

Generator3 Generator3::symmetric(double rate) {
    Matrix3 k = Matrix3::Constant(rate);
    k.diagonal().setConstant(-2.0 * rate);
    return Generator3(k);
}

Generator3 Generator3::cycle(double rate) {
    Matrix3 k = Matrix3::Zero();
    k(1, 0) = rate;
    k(2, 1) = rate;
    k(0, 2) = rate;
    k.diagonal().setConstant(-rate);
    return Generator3(k);
}

std::string_view to_string(MemoryKind kind) noexcept {
    switch (kind) {
    case MemoryKind::markov: return "markov";
    case MemoryKind::gme_exponential: return "gme_exponential";
    case MemoryKind::erlang2_embedded: return "erlang2_embedded";
    case MemoryKind::erlang2_montecarlo: return "erlang2_montecarlo";
    case MemoryKind::fractional: return "fractional";
    }
    return "unknown";
}

MemoryKind parse_memory_kind(std::string_view name) {
    if (name == "markov") return MemoryKind::markov;
    if (name == "gme" || name == "gme_exponential") return MemoryKind::gme_exponential;
    if (name == "erlang2" || name == "erlang2_embedded") return MemoryKind::erlang2_embedded;
    if (name == "erlang2-mc" || name == "erlang2_montecarlo") return MemoryKind::erlang2_montecarlo;
    if (name == "fractional") return MemoryKind::fractional;
    fail(ErrorKind::usage, "unknown memory model '" + std::string(name) +
                               "' (expected markov, gme, erlang2, erlang2-mc or fractional)");
}

std::string_view to_string(PhaseStart start) noexcept {
    return start == PhaseStart::fresh ? "fresh" : "stationary";
}

PhaseStart parse_phase_start(std::string_view name) {
    if (name == "fresh") return PhaseStart::fresh;
    if (name == "stationary") return PhaseStart::stationary;
    fail(ErrorKind::usage, "unknown phase start '" + std::string(name) + "' (expected fresh or stationary)");
}

void MemoryConfig::validate() const {
    if (kind == MemoryKind::gme_exponential && !(gamma > 0.0 && std::isfinite(gamma))) {
        std::ostringstream os;
        os << "gamma must be positive, got " << gamma;
        fail(ErrorKind::domain, os.str());
    }
    if (kind == MemoryKind::fractional && !(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "alpha must lie in (0, 1], got " << alpha;
        fail(ErrorKind::domain, os.str());
    }
    if (kind == MemoryKind::erlang2_montecarlo && n_traj < 1)
        fail(ErrorKind::domain, "n_traj must be >= 1");
}

namespace {

SimplexPoint to_simplex(const Vector3& p, std::size_t& clipped) {
    bool c = false;
    SimplexPoint out = SimplexPoint::from_propagated({p(0), p(1), p(2)}, &c);
    clipped += static_cast<std::size_t>(c);
    return out;
}

Vector3 as_vector(const SimplexPoint& p) { return {p[0], p[1], p[2]}; }

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        fail(ErrorKind::domain, "time must be finite and >= 0");
}

Eigen::Matrix<double, 6, 3> phase_lift(PhaseStart start) {
    Eigen::Matrix<double, 6, 3> r = Eigen::Matrix<double, 6, 3>::Zero();
    for (int i = 0; i < 3; ++i) {
        if (start == PhaseStart::fresh) {
            r(2 * i, i) = 1.0;
        } else {
            r(2 * i, i) = 0.5;
            r(2 * i + 1, i) = 0.5;
        }
    }
    return r;
}

} // namespace

SimplexPoint markov_propagate(const Generator3& gen, const SimplexPoint& p0, double t) {
    check_time(t);
    if (t == 0.0)
        return p0;
    const Matrix3 m = (t * gen.rates()).exp();
    std::size_t clipped = 0;
    return to_simplex(m * as_vector(p0), clipped);
}

void validate_time_grid(const std::vector<double>& grid) {
    if (grid.empty())
        fail(ErrorKind::domain, "time grid is empty");
    if (!(grid.front() >= 0.0))
        fail(ErrorKind::domain, "time grid must start at t >= 0");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]))
            fail(ErrorKind::domain, "time grid entries must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            fail(ErrorKind::domain, "time grid must be strictly increasing");
    }
}

Matrix6 gme_embedding(const Generator3& gen, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        fail(ErrorKind::domain, "gamma must be positive");
    Matrix6 a = Matrix6::Zero();
    a.topRightCorner<3, 3>() = Matrix3::Identity();
    a.bottomLeftCorner<3, 3>() = gamma * gen.rates();
    a.bottomRightCorner<3, 3>() = -gamma * Matrix3::Identity();
    return a;
}

Eigen::Matrix<double, 6, 1> PhaseEmbedding::lift(const SimplexPoint& p0, PhaseStart start) const {
    return phase_lift(start) * as_vector(p0);
}

PhaseEmbedding erlang2_phase_embed(const Generator3& gen) {
    PhaseEmbedding e;
    e.rates.setZero();
    e.marginal.setZero();
    const Matrix3& k = gen.rates();
    for (int i = 0; i < 3; ++i) {
        const double r = gen.exit_rate(static_cast<std::size_t>(i));
        if (!(r > 0.0)) {
            std::ostringstream os;
            os << "state " << i + 1 << " is absorbing; Erlang-2 sojourns need positive exit rates";
            fail(ErrorKind::degenerate, os.str());
        }
        const int p1 = 2 * i;
        const int p2 = 2 * i + 1;
        e.rates(p2, p1) = 2.0 * r;
        e.rates(p1, p1) = -2.0 * r;
        // Leaving phase 2 of state i lands in phase 1 of j with rate 2 r P(i -> j) = 2 K(j, i).
        double out = 0.0;
        for (int j = 0; j < 3; ++j) {
            if (j == i)
                continue;
            e.rates(2 * j, p2) = 2.0 * k(j, i);
            out += 2.0 * k(j, i);
        }
        e.rates(p2, p2) = -out;
        e.marginal(i, p1) = 1.0;
        e.marginal(i, p2) = 1.0;
    }
    return e;
}

Propagator::Propagator(const Generator3& gen, const MemoryConfig& memory, std::vector<double> grid)
    : grid_(std::move(grid)) {
    memory.validate();
    validate_time_grid(grid_);
    maps_.resize(grid_.size());
    switch (memory.kind) {
    case MemoryKind::markov:
        for (std::size_t k = 0; k < grid_.size(); ++k)
            maps_[k] = grid_[k] == 0.0 ? Matrix3::Identity().eval() : (grid_[k] * gen.rates()).exp().eval();
        break;
    case MemoryKind::gme_exponential: {
        const Matrix6 a = gme_embedding(gen, memory.gamma);
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            if (grid_[k] == 0.0) {
                maps_[k] = Matrix3::Identity();
                continue;
            }
            const Matrix6 e = (grid_[k] * a).exp();
            maps_[k] = e.topLeftCorner<3, 3>();
        }
        break;
    }
    case MemoryKind::erlang2_embedded: {
        const PhaseEmbedding emb = erlang2_phase_embed(gen);
        const Eigen::Matrix<double, 6, 3> lift = phase_lift(memory.phase_start);
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            if (grid_[k] == 0.0) {
                maps_[k] = Matrix3::Identity();
                continue;
            }
            const Matrix6 e = (grid_[k] * emb.rates).exp();
            maps_[k] = emb.marginal * e * lift;
        }
        break;
    }
    case MemoryKind::fractional: {
        const RelaxationModes modes = relaxation_modes(gen);
        const ml::MittagLeffler ml(memory.alpha);
        const Matrix3 fixed = gen.pi_vector() * Eigen::RowVector3d::Ones();
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const double t = grid_[k];
            if (t == 0.0) {
                maps_[k] = Matrix3::Identity();
                continue;
            }
            const double ta = std::pow(t, memory.alpha);
            Matrix3 m = fixed;
            for (std::size_t i = 0; i < 2; ++i)
                m += ml(modes.rates[i] * ta) * modes.projectors[i];
            maps_[k] = m;
        }
        break;
    }
    case MemoryKind::erlang2_montecarlo:
        fail(ErrorKind::domain, "the Monte Carlo model has no linear propagator");
    }
}

ProbTrajectory Propagator::apply(const SimplexPoint& p0) const {
    ProbTrajectory out;
    out.times = grid_;
    out.states.reserve(grid_.size());
    const Vector3 p = as_vector(p0);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (grid_[k] == 0.0)
            out.states.push_back(p0);
        else
            out.states.push_back(to_simplex(maps_[k] * p, out.clipped));
    }
    return out;
}

ProbTrajectory markov_trajectory(const Generator3& gen, const SimplexPoint& p0,
                                 const std::vector<double>& grid) {
    MemoryConfig m;
    m.kind = MemoryKind::markov;
    return Propagator(gen, m, grid).apply(p0);
}

ProbTrajectory gme_exponential_propagate(const Generator3& gen, double gamma, const SimplexPoint& p0,
                                         const std::vector<double>& grid) {
    MemoryConfig m;
    m.kind = MemoryKind::gme_exponential;
    m.gamma = gamma;
    return Propagator(gen, m, grid).apply(p0);
}

ProbTrajectory erlang2_propagate(const Generator3& gen, const SimplexPoint& p0,
                                 const std::vector<double>& grid, PhaseStart start) {
    MemoryConfig m;
    m.kind = MemoryKind::erlang2_embedded;
    m.phase_start = start;
    return Propagator(gen, m, grid).apply(p0);
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate) {
    return -std::log1p(-unit_uniform(rng)) / rate;
}

} // namespace

ProbTrajectory erlang2_monte_carlo(const Generator3& gen, const SimplexPoint& p0,
                                   const std::vector<double>& grid, std::uint64_t n_traj,
                                   std::uint64_t seed, std::size_t workers) {
    if (n_traj < 1)
        fail(ErrorKind::domain, "n_traj must be >= 1");
    validate_time_grid(grid);
    const Matrix3& k = gen.rates();
    std::array<double, 3> rate{};
    for (std::size_t i = 0; i < 3; ++i) {
        rate[i] = gen.exit_rate(i);
        if (!(rate[i] > 0.0)) {
            std::ostringstream os;
            os << "state " << i + 1 << " is absorbing; Erlang-2 sojourns need positive exit rates";
            fail(ErrorKind::degenerate, os.str());
        }
    }
    // Jump targets from i: the two other states, with P(i -> j) = K(j, i) / r_i.
    std::array<std::array<int, 2>, 3> target{};
    std::array<double, 3> first_prob{};
    for (int i = 0; i < 3; ++i) {
        const int a = (i + 1) % 3;
        const int b = (i + 2) % 3;
        target[static_cast<std::size_t>(i)] = {a, b};
        first_prob[static_cast<std::size_t>(i)] = k(a, i) / rate[static_cast<std::size_t>(i)];
    }

    const std::size_t g = grid.size();
    std::vector<std::uint64_t> counts(3 * g, 0);
    std::mutex merge;
    const std::uint64_t blocks = (n_traj + monte_carlo_block - 1) / monte_carlo_block;

    parallel_for(
        static_cast<std::size_t>(blocks),
        [&](std::size_t block) {
            std::mt19937_64 rng(derive_seed(seed, block));
            std::vector<std::uint64_t> local(3 * g, 0);
            const std::uint64_t begin = block * monte_carlo_block;
            const std::uint64_t end = std::min<std::uint64_t>(n_traj, begin + monte_carlo_block);
            for (std::uint64_t n = begin; n < end; ++n) {
                const double u = unit_uniform(rng);
                std::size_t s = u < p0[0] ? 0 : (u < p0[0] + p0[1] ? 1 : 2);
                double t = 0.0;
                std::size_t at = 0;
                for (;;) {
                    const double next = t + exponential(rng, 2.0 * rate[s]) + exponential(rng, 2.0 * rate[s]);
                    while (at < g && grid[at] < next)
                        ++local[s * g + at++];
                    if (at == g)
                        break;
                    const double v = unit_uniform(rng);
                    s = static_cast<std::size_t>(target[s][v < first_prob[s] ? 0 : 1]);
                    t = next;
                }
            }
            std::lock_guard<std::mutex> lock(merge);
            for (std::size_t i = 0; i < local.size(); ++i)
                counts[i] += local[i];
        },
        workers);

    ProbTrajectory out;
    out.times = grid;
    out.states.reserve(g);
    out.standard_errors.reserve(g);
    const double n = static_cast<double>(n_traj);
    for (std::size_t j = 0; j < g; ++j) {
        std::array<double, 3> p{};
        std::array<double, 3> se{};
        for (std::size_t i = 0; i < 3; ++i) {
            p[i] = static_cast<double>(counts[i * g + j]) / n;
            se[i] = std::sqrt(p[i] * (1.0 - p[i]) / n);
        }
        out.states.push_back(SimplexPoint::from_propagated(p));
        out.standard_errors.push_back(se);
    }
    return out;
}

RelaxationModes relaxation_modes(const Generator3& gen) {
    const Matrix3& k = gen.rates();
    Eigen::EigenSolver<Matrix3> es(k);
    if (es.info() != Eigen::Success)
        fail(ErrorKind::spectrum, "eigen-decomposition of the generator failed");
    const double scale = std::max(1.0, gen.norm1());
    const auto lambda = es.eigenvalues();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(lambda(i).imag()) > 1e-9 * scale) {
            std::ostringstream os;
            os << "generator has complex eigenvalue " << lambda(i).real() << (lambda(i).imag() < 0 ? " - " : " + ")
               << std::abs(lambda(i).imag()) << "i; the fractional propagator needs a real spectrum";
            fail(ErrorKind::spectrum, os.str());
        }
    }
    const Matrix3 v = es.eigenvectors().real();
    Eigen::JacobiSVD<Matrix3> svd(v);
    const auto sv = svd.singularValues();
    if (!(sv(2) > 1e-10 * sv(0)))
        fail(ErrorKind::spectrum, "generator is defective (eigenvectors are not independent)");
    const Matrix3 w = v.inverse();

    int zero = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(lambda(i).real()) < std::abs(lambda(zero).real()))
            zero = i;
    RelaxationModes out;
    std::size_t m = 0;
    for (int i = 0; i < 3; ++i) {
        if (i == zero)
            continue;
        const double mu = lambda(i).real();
        if (!(mu < -1e-12 * scale))
            fail(ErrorKind::spectrum, "generator has more than one non-decaying mode");
        out.rates[m] = -mu;
        out.projectors[m] = v.col(i) * w.row(i);
        ++m;
    }
    return out;
}

ProbTrajectory fractional_propagate(const Generator3& gen, double alpha, const SimplexPoint& p0,
                                    const std::vector<double>& grid) {
    MemoryConfig m;
    m.kind = MemoryKind::fractional;
    m.alpha = alpha;
    return Propagator(gen, m, grid).apply(p0);
}

ProbTrajectory caputo_oracle(const Generator3& gen, double alpha, const SimplexPoint& p0,
                             const std::vector<double>& grid) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        fail(ErrorKind::domain, "alpha must lie in (0, 1]");
    validate_time_grid(grid);
    if (grid.size() < 2 || grid.front() != 0.0)
        fail(ErrorKind::domain, "the predictor-corrector needs a uniform grid starting at 0");
    const std::size_t steps = grid.size() - 1;
    const double h = grid.back() / static_cast<double>(steps);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(grid[i] - h * static_cast<double>(i)) > 1e-9 * std::max(1.0, grid.back()))
            fail(ErrorKind::domain, "the predictor-corrector needs a uniform grid");
    if (h * gen.norm1() > caputo_max_step_norm) {
        std::ostringstream os;
        os << "step " << h << " too large: need h * ||K||_1 <= " << caputo_max_step_norm;
        fail(ErrorKind::step_size, os.str());
    }

    const Matrix3& k = gen.rates();
    const Vector3 pi = gen.pi_vector();
    const Vector3 y0 = as_vector(p0) - pi;
    const double pred_scale = std::pow(h, alpha) / boost::math::tgamma(alpha + 1.0);
    const double corr_scale = std::pow(h, alpha) / boost::math::tgamma(alpha + 2.0);

    // b_m = (m+1)^a - m^a, c_m = (m+2)^(a+1) + m^(a+1) - 2 (m+1)^(a+1).
    std::vector<double> b(steps + 1), c(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
        const double x = static_cast<double>(m);
        b[m] = std::pow(x + 1.0, alpha) - std::pow(x, alpha);
        c[m] = std::pow(x + 2.0, alpha + 1.0) + std::pow(x, alpha + 1.0) - 2.0 * std::pow(x + 1.0, alpha + 1.0);
    }

    std::array<std::vector<double>, 3> f;
    for (auto& comp : f)
        comp.resize(steps + 1);
    auto store = [&](std::size_t j, const Vector3& y) {
        const Vector3 ky = k * y;
        for (int i = 0; i < 3; ++i)
            f[static_cast<std::size_t>(i)][j] = ky(i);
    };

    ProbTrajectory out;
    out.times = grid;
    out.states.reserve(grid.size());
    out.states.push_back(p0);
    store(0, y0);

    for (std::size_t n = 0; n < steps; ++n) {
        const double x = static_cast<double>(n);
        const double a0 = std::pow(x, alpha + 1.0) - (x - alpha) * std::pow(x + 1.0, alpha);
        Vector3 pred = Vector3::Zero();
        Vector3 corr = Vector3::Zero();
        for (int i = 0; i < 3; ++i) {
            const double* fi = f[static_cast<std::size_t>(i)].data();
            double sp = 0.0;
            double sc = a0 * fi[0];
            for (std::size_t j = 0; j <= n; ++j)
                sp += b[n - j] * fi[j];
            for (std::size_t j = 1; j <= n; ++j)
                sc += c[n - j] * fi[j];
            pred(i) = sp;
            corr(i) = sc;
        }
        const Vector3 yp = y0 + pred_scale * pred;
        const Vector3 y = y0 + corr_scale * (corr + k * yp);
        store(n + 1, y);
        out.states.push_back(to_simplex(pi + y, out.clipped));
    }
    return out;
}

ProbTrajectory propagate(const Generator3& gen, const MemoryConfig& memory, const SimplexPoint& p0,
                         const std::vector<double>& grid) {
    memory.validate();
    if (memory.kind == MemoryKind::erlang2_montecarlo)
        return erlang2_monte_carlo(gen, p0, grid, memory.n_traj, memory.seed);
    return Propagator(gen, memory, grid).apply(p0);
}

} // namespace infoflow
