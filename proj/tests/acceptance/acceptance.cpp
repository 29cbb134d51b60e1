// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "infoflow/backflow.hpp"
#include "infoflow/classical.hpp"
#include "infoflow/cli.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/info_measures.hpp"
#include "infoflow/io.hpp"
#include "infoflow/mittag_leffler.hpp"
#include "infoflow/quantum.hpp"
#include "infoflow/sweeps.hpp"

#include "../oracles.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace infoflow;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok)
            pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
    }
};

std::string num(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

double sup_distance(const ProbTrajectory& a, const ProbTrajectory& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i)
            d = std::max(d, std::abs(a.states[k][i] - b.states[k][i]));
    return d;
}

double mass_drift(const ProbTrajectory& t) {
    double d = 0.0;
    for (const SimplexPoint& p : t.states)
        d = std::max(d, std::abs(p[0] + p[1] + p[2] - 1.0));
    return d;
}

double distance_to(const ProbTrajectory& t, const SimplexPoint& pi) {
    double d = 0.0;
    for (const SimplexPoint& p : t.states)
        for (std::size_t i = 0; i < 3; ++i)
            d = std::max(d, std::abs(p[i] - pi[i]));
    return d;
}

void criterion_1(Verdict& v) {
    double e1 = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        const double x = 0.01 * i;
        e1 = std::max(e1, std::abs(ml::ml_neg({1.0, x}) - std::exp(-x)));
    }
    v.require(e1 <= 1e-10, "unit order max err " + num(e1));

    double e2 = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = 0.005 * i;
        e2 = std::max(e2, std::abs(ml::ml_neg({0.5, x}) - oracle::ml_half(x)));
    }
    v.require(e2 <= 1e-8, "half order max err " + num(e2));

    // Overlap band between the asymptotic and Taylor cut-offs.
    double e3 = 0.0;
    for (double a : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
        for (int i = 0; i <= 24; ++i) {
            const double x = ml::default_asymptotic_limit +
                             (ml::default_taylor_limit - ml::default_asymptotic_limit) * i / 24.0;
            const double ref = oracle::ml_series(a, x);
            e3 = std::max(e3, std::abs(ml::ml_neg({a, x}) - ref) / ref);
        }
    }
    v.require(e3 <= 1e-9, "multiprecision series max rel err " + num(e3));
}

void criterion_2(Verdict& v) {
    const Trajectory traj = sample_bqe({1.0, 1.0, 3.0}, 20.0);
    double e = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        const double s = std::sin(3.0 * t);
        e = std::max(e, std::abs(traj.values[k] - 0.25 * std::exp(-2.0 * t) * s * s));
    }
    v.require(e <= 1e-9, "unit order trajectory max err " + num(e));

    bool zero = true;
    for (double a : {0.1, 0.3, 0.5, 0.7, 1.0})
        zero = zero && n_qe({a, 1.0, 0.0}, 200.0) == 0.0;
    v.require(zero, "no-oscillation revival exactly 0");

    double worst = 0.0;
    for (double a : {0.3, 0.5, 0.8}) {
        const double base = n_qe({a, 1.0, 5.0}, 200.0);
        for (double c : {0.5, 3.0, 10.0})
            worst = std::max(worst, std::abs(n_qe({a, c, 5.0 * c}, 200.0 / c) - base) / base);
    }
    v.require(worst <= 1e-8, "rescaling max rel change " + num(worst));
}

void criterion_3(Verdict& v) {
    const auto horizons = log_spaced(1e3, 1e5, 5);
    for (double a : {0.3, 0.4, 0.7, 0.9}) {
        const HorizonScaling s = horizon_scaling({a, 1.0, 5.0}, horizons);
        if (a < 0.5)
            v.require(std::abs(s.slope - (1.0 - 2.0 * a)) <= 0.05,
                      "alpha " + num(a) + " slope " + num(s.slope) + " vs " + num(1.0 - 2.0 * a));
        else
            v.require(s.slope <= 0.02, "alpha " + num(a) + " slope " + num(s.slope));
    }

    const PhaseGrid grid = quantum_phase_diagram(QuantumSweepConfig{});
    const auto boundary = boundary_extract(grid, BoundaryMode::gradient);
    std::size_t inside = 0;
    double mean = 0.0;
    for (const BoundaryPoint& b : boundary) {
        inside += b.axis1 >= 0.4 - 1e-12 && b.axis1 <= 0.6 + 1e-12;
        mean += b.axis1;
    }
    mean /= static_cast<double>(boundary.size());
    const double frac = static_cast<double>(inside) / static_cast<double>(boundary.size());
    v.require(frac >= 0.8, "gradient boundary rows in [0.4, 0.6]: " + num(100.0 * frac) + "% (mean alpha " +
                               num(mean) + ")");
}

void criterion_4(Verdict& v) {
    SimplexMapConfig c;
    c.metric = Metric::n_dkl;
    c.resolution = 40;
    const PhaseGrid g = simplex_map(Generator3::desk_default(), c);
    double worst = 0.0;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (g.is_valid(i, j)) {
                worst = std::max(worst, g.at(i, j));
                ++cells;
            }
    v.require(cells == 41 * 42 / 2, std::to_string(cells) + " cells");
    v.require(worst <= 1e-8, "max relative-entropy backflow " + num(worst));
}

void criterion_5(Verdict& v) {
    const Generator3 gen = Generator3::desk_default();
    const SimplexPoint p0(1, 0, 0);
    const auto fine = uniform_grid(5.0, 500);
    const ProbTrajectory gme = gme_exponential_propagate(gen, 1e3 * gen.norm1(), p0, fine);
    const double d = sup_distance(gme, markov_trajectory(gen, p0, fine));
    v.require(d <= 1e-2, "fast-memory sup distance " + num(d));

    const auto grid = uniform_grid(5.0, 10);
    const ProbTrajectory emb = erlang2_propagate(gen, p0, grid);
    const ProbTrajectory mc = erlang2_monte_carlo(gen, p0, grid, 100000, 1);
    double z = 0.0;
    bool within = true;
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i) {
            const double diff = std::abs(emb.states[k][i] - mc.states[k][i]);
            const double se = mc.standard_errors[k][i];
            within = within && diff <= 3.0 * se;
            if (se > 0.0)
                z = std::max(z, diff / se);
        }
    v.require(within, "embedding vs Monte Carlo max |z| " + num(z));

    const double drift = std::max({mass_drift(gme), mass_drift(emb), mass_drift(mc)});
    v.require(drift <= 1e-8, "mass drift " + num(drift));
    const double fix = std::max(distance_to(gme_exponential_propagate(gen, 2.0, gen.pi(), fine), gen.pi()),
                                distance_to(erlang2_propagate(gen, gen.pi(), fine, PhaseStart::stationary), gen.pi()));
    v.require(fix <= 1e-8, "stationary drift " + num(fix));
}

void criterion_6(Verdict& v) {
    const Generator3 gen = Generator3::desk_default();
    const SimplexPoint p0(1, 0, 0);
    const auto grid = uniform_grid(10.0, 10000);
    for (double a : {0.3, 0.5, 0.8}) {
        const double d = sup_distance(fractional_propagate(gen, a, p0, grid), caputo_oracle(gen, a, p0, grid));
        v.require(d <= 1e-3, "alpha " + num(a) + " vs predictor-corrector " + num(d));
    }
    const double m = sup_distance(fractional_propagate(gen, 1.0, p0, grid), markov_trajectory(gen, p0, grid));
    v.require(m <= 1e-8, "unit order vs Markov " + num(m));
    const ProbTrajectory sym = fractional_propagate(Generator3::symmetric(), 0.5, p0, grid);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        e = std::max(e, std::abs(sym.states[k][0] - (1.0 / 3.0 + 2.0 / 3.0 * oracle::ml_half(3.0 * std::sqrt(grid[k])))));
    v.require(e <= 1e-8, "symmetric closed form " + num(e));
}

void criterion_7(Verdict& v) {
    const AlphaSweep s = classical_alpha_sweep(Generator3::desk_default(), AlphaSweepConfig{});
    std::vector<double> profile;
    std::ostringstream os;
    for (std::size_t a = 0; a < s.metric.rows(); ++a) {
        profile.push_back(s.metric.at(a, 0));
        os << (a ? " " : "") << num(profile.back());
    }
    const auto d = steepest_decline(s.metric.axis1.values, profile);
    if (!d) {
        v.require(false, "profile flat (" + os.str() + ")");
        return;
    }
    v.require(d->location >= 0.4 && d->location <= 0.6, "steepest decline at alpha " + num(d->location));
}

void criterion_8(Verdict& v) {
    const BackflowResult r = backflow_functional(Trajectory{{0, 1, 2, 3}, {0, 1, 0.5, 2}});
    const bool ex = r.n_i == 2.5 && r.intervals.size() == 2 && r.intervals[0].t_start == 0.0 &&
                    r.intervals[0].t_end == 1.0 && r.intervals[1].t_start == 2.0 && r.intervals[1].t_end == 3.0;
    v.require(ex, "four-sample example " + num(r.n_i));

    Trajectory decay;
    decay.times = uniform_grid(5.0, 500);
    for (double t : decay.times)
        decay.values.push_back(std::exp(-t));
    Trajectory rising = decay;
    for (double& x : rising.values)
        x = -x;
    Trajectory falling;
    falling.times = decay.times;
    for (double t : decay.times)
        falling.values.push_back(-t * t);
    const double mono = backflow_functional(decay).n_i + backflow_functional(falling).n_i;
    v.require(mono == 0.0, "monotone non-increasing inputs give 0");
    const double up = backflow_functional(rising).n_i;
    v.require(std::abs(up - (rising.values.back() - rising.values.front())) <= 1e-12,
              "monotone increasing input gives its net rise");

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> step(0.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        Trajectory t;
        double x = 0.0;
        for (int k = 0; k < 200; ++k) {
            t.times.push_back(0.05 * k);
            t.values.push_back(x);
            x += step(rng);
        }
        const BackflowResult b = backflow_functional(t);
        worst = std::max(worst, std::abs(b.n_i - b.total_fall - (t.values.back() - t.values.front())));
    }
    v.require(worst <= 1e-12, "telescoping max err " + num(worst));
}

void criterion_9(Verdict& v) {
    SimplexMapConfig c;
    c.metric = Metric::delta_h;
    c.resolution = 40;
    const PhaseGrid sym = simplex_map(Generator3::symmetric(), c);
    v.require(sym.max_value() == 0.0, "symmetric Markov max overshoot " + num(sym.max_value()));

    c.memory.kind = MemoryKind::gme_exponential;
    c.memory.gamma = 2.0;
    const Generator3 gen = Generator3::desk_default();
    const PhaseGrid fine = simplex_map(gen, c);
    c.resolution = 20;
    const PhaseGrid coarse = simplex_map(gen, c);
    std::size_t hot = 0, cells = 0, agree = 0, shared = 0;
    for (std::size_t i = 0; i <= 40; ++i)
        for (std::size_t j = 0; i + j <= 40; ++j) {
            ++cells;
            hot += fine.at(i, j) > 1e-3;
            if (i % 2 == 0 && j % 2 == 0) {
                ++shared;
                agree += (fine.at(i, j) > 1e-3) == (coarse.at(i / 2, j / 2) > 1e-3);
            }
        }
    v.require(hot > 0, "slow-memory overshoot cells " + std::to_string(hot) + "/" + std::to_string(cells));
    v.require(agree == shared, "refinement sign agreement " + std::to_string(agree) + "/" + std::to_string(shared));
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    return fs::exists(a) && fs::exists(b) && io::read_file(a) == io::read_file(b);
}

void criterion_10(Verdict& v) {
    const fs::path root = fs::temp_directory_path() / "infoflow_acceptance_repro";
    fs::remove_all(root);
    struct Run {
        std::string name;
        std::vector<std::string> args;
        std::vector<std::string> files;
    };
    const std::vector<Run> runs = {
        {"quantum-traj", {"quantum-traj", "--alpha", "0.4", "--omega", "5", "--horizon", "50"}, {"quantum_traj.csv"}},
        {"quantum-phase",
         {"quantum-phase", "--alpha-n", "4", "--ratio-n", "3", "--horizon", "50"},
         {"quantum_phase.csv"}},
        {"markov", {"classical-traj", "--model", "markov"}, {"classical_traj.csv"}},
        {"gme", {"classical-traj", "--model", "gme", "--gamma", "2"}, {"classical_traj.csv"}},
        {"erlang2", {"classical-traj", "--model", "erlang2"}, {"classical_traj.csv"}},
        {"fractional", {"classical-traj", "--model", "fractional", "--alpha", "0.6"}, {"classical_traj.csv"}},
        {"erlang2-mc",
         {"classical-traj", "--model", "erlang2-mc", "--ntraj", "20000", "--seed", "7"},
         {"classical_traj.csv"}},
        {"classical-map",
         {"classical-map", "--model", "gme", "--gamma", "2", "--resolution", "8", "--steps", "200"},
         {"classical_map.csv"}},
        {"classical-map-mc",
         {"classical-map", "--model", "erlang2-mc", "--ntraj", "2000", "--resolution", "4", "--steps", "20",
          "--metric", "n_h"},
         {"classical_map.csv"}},
        {"alpha-sweep",
         {"alpha-sweep", "--alpha-n", "3", "--horizons", "5,10", "--steps", "500"},
         {"alpha_sweep.csv", "alpha_sweep_growth_0.csv"}},
    };
    std::size_t identical = 0, total = 0;
    for (const Run& r : runs) {
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<std::string> args{"infoflow"};
            args.insert(args.end(), r.args.begin(), r.args.end());
            args.push_back("--output-dir");
            args.push_back((root / (r.name + "_" + std::to_string(rep))).string());
            std::istringstream in;
            std::ostringstream out, err;
            if (cli::run(args, in, out, err) != 0)
                v.require(false, r.name + " run " + std::to_string(rep) + ": " + err.str());
        }
        for (const std::string& f : r.files) {
            ++total;
            identical += same_bytes(root / (r.name + "_0") / f, root / (r.name + "_1") / f);
        }
    }
    v.require(identical == total, "byte-identical CSV " + std::to_string(identical) + "/" + std::to_string(total));

    const Generator3 gen = Generator3::desk_default();
    const auto grid = uniform_grid(3.0, 30);
    const ProbTrajectory a = erlang2_monte_carlo(gen, SimplexPoint(1, 0, 0), grid, 100000, 11);
    const ProbTrajectory b = erlang2_monte_carlo(gen, SimplexPoint(1, 0, 0), grid, 100000, 11, 1);
    bool same = true;
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i)
            same = same && a.states[k][i] == b.states[k][i] && a.standard_errors[k][i] == b.standard_errors[k][i];
    v.require(same, "Monte Carlo bit-identical across reruns and worker counts");
    fs::remove_all(root);
}

} // namespace

int main() {
    const std::vector<std::function<void(Verdict&)>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    };
    int failures = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[n](v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !v.pass;
        std::cout << "AC" << n + 1 << " " << (v.pass ? "PASS" : "FAIL") << " (" << num(secs) << " s) "
                  << v.detail.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
