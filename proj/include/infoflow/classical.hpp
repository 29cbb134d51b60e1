// classical.hpp: three-state relaxation under several memory constructions
//
// Convention: p is a column vector and dp/dt = K p, so K(i, j) is the rate of
// jumps j -> i and every column of K sums to zero. All propagators share the
// generator K and its stationary distribution pi.

#pragma once

#include "infoflow/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace infoflow {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double column_sum_tolerance = 1e-12;
inline constexpr double stationarity_tolerance = 1e-10;

// Throws Error(domain) on negative off-diagonal rates or nonzero column sums.
void validate_rates(const Matrix3& rates);

// Strong connectivity of the graph of nonzero off-diagonal rates.
bool is_irreducible(const Matrix3& rates);

// Unique positive null vector of K, normalized. Throws Error(degenerate) when
// the chain is reducible.
Vector3 stationary(const Matrix3& rates);

class Generator3 {
public:
    explicit Generator3(const Matrix3& rates);

    const Matrix3& rates() const noexcept { return k_; }
    const SimplexPoint& pi() const noexcept { return pi_; }
    Vector3 pi_vector() const { return {pi_[0], pi_[1], pi_[2]}; }

    // r_i: total rate of leaving state i.
    double exit_rate(std::size_t i) const noexcept { return exit_[i]; }

    // Maximum absolute column sum.
    double norm1() const;

    // Rates j -> i: 1<->2 at (2, 1), 2<->3 at (1, 1), 1<->3 at (0.5, 0.25).
    // Reversible, pi = (1/2, 1/4, 1/4), eigenvalues {0, -7/4, -4}.
    static Generator3 desk_default();
    // All off-diagonal rates equal; pi uniform, eigenvalues {0, -3r, -3r}.
    static Generator3 symmetric(double rate = 1.0);
    // Unidirectional cycle 1 -> 2 -> 3 -> 1; complex spectrum.
    static Generator3 cycle(double rate = 1.0);

private:
    Matrix3 k_;
    SimplexPoint pi_;
    std::array<double, 3> exit_{};
};

enum class MemoryKind { markov, gme_exponential, erlang2_embedded, erlang2_montecarlo, fractional };

std::string_view to_string(MemoryKind kind) noexcept;
// Accepts the canonical names plus the CLI spellings gme, erlang2, erlang2-mc.
MemoryKind parse_memory_kind(std::string_view name);

// Initial phase occupation for the Erlang-2 embedding.
enum class PhaseStart { fresh, stationary };

std::string_view to_string(PhaseStart start) noexcept;
PhaseStart parse_phase_start(std::string_view name);

struct MemoryConfig {
    MemoryKind kind = MemoryKind::markov;
    double gamma = 2.0;
    double alpha = 1.0;
    std::uint64_t n_traj = 100000;
    std::uint64_t seed = 1;
    PhaseStart phase_start = PhaseStart::fresh;

    void validate() const;
    bool stochastic() const noexcept { return kind == MemoryKind::erlang2_montecarlo; }
};

SimplexPoint markov_propagate(const Generator3& gen, const SimplexPoint& p0, double t);

// Grid checks shared by all trajectory propagators: non-empty, starts at 0,
// strictly increasing.
void validate_time_grid(const std::vector<double>& grid);

// Linear propagator p(t_k) = M_k p0 for every grid time, built once and
// applied to many initial conditions.
class Propagator {
public:
    Propagator(const Generator3& gen, const MemoryConfig& memory, std::vector<double> grid);

    const std::vector<double>& grid() const noexcept { return grid_; }
    const Matrix3& at(std::size_t k) const { return maps_[k]; }

    ProbTrajectory apply(const SimplexPoint& p0) const;

private:
    std::vector<double> grid_;
    std::vector<Matrix3> maps_;
};

ProbTrajectory markov_trajectory(const Generator3& gen, const SimplexPoint& p0,
                                 const std::vector<double>& grid);

// The 6x6 generator [[0, I], [gamma K, -gamma I]] of the embedding x = (p, q).
Matrix6 gme_embedding(const Generator3& gen, double gamma);

ProbTrajectory gme_exponential_propagate(const Generator3& gen, double gamma, const SimplexPoint& p0,
                                         const std::vector<double>& grid);

// Phase-type embedding with states ordered (1,1), (1,2), (2,1), (2,2), (3,1), (3,2).
struct PhaseEmbedding {
    Matrix6 rates;
    Eigen::Matrix<double, 3, 6> marginal;

    // Initial 6-vector for a physical distribution p0.
    Eigen::Matrix<double, 6, 1> lift(const SimplexPoint& p0, PhaseStart start) const;
};

PhaseEmbedding erlang2_phase_embed(const Generator3& gen);

ProbTrajectory erlang2_propagate(const Generator3& gen, const SimplexPoint& p0,
                                 const std::vector<double>& grid,
                                 PhaseStart start = PhaseStart::fresh);

// Trajectories are simulated in blocks of this size, each with its own
// mt19937_64 stream seeded by derive_seed(seed, block).
inline constexpr std::uint64_t monte_carlo_block = 4096;

ProbTrajectory erlang2_monte_carlo(const Generator3& gen, const SimplexPoint& p0,
                                   const std::vector<double>& grid, std::uint64_t n_traj,
                                   std::uint64_t seed, std::size_t workers = 0);

// Real eigen-decomposition of K used by the fractional propagator.
struct RelaxationModes {
    std::array<double, 2> rates{};           // |mu| of the two decaying modes
    std::array<Matrix3, 2> projectors{};     // v_i w_i^T
};

// Throws Error(spectrum) for complex or defective spectra.
RelaxationModes relaxation_modes(const Generator3& gen);

ProbTrajectory fractional_propagate(const Generator3& gen, double alpha, const SimplexPoint& p0,
                                    const std::vector<double>& grid);

// Largest h * ||K||_1 accepted by the predictor-corrector oracle.
inline constexpr double caputo_max_step_norm = 0.1;

// Fractional Adams-Bashforth-Moulton on a uniform grid. Reference solver only.
ProbTrajectory caputo_oracle(const Generator3& gen, double alpha, const SimplexPoint& p0,
                             const std::vector<double>& grid);

// Dispatches on memory.kind.
ProbTrajectory propagate(const Generator3& gen, const MemoryConfig& memory, const SimplexPoint& p0,
                         const std::vector<double>& grid);

} // namespace infoflow
