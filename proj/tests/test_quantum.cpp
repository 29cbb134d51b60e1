#include "infoflow/errors.hpp"
#include "infoflow/quantum.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace infoflow;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::usage;
}

} // namespace

TEST_CASE("initial value and exponential envelope") {
    CHECK(b_qe({0.5, 1.0, 5.0}, 0.0) == 0.0);
    const double t = 0.3;
    const double s = std::sin(3.0 * t);
    CHECK(b_qe({1.0, 1.0, 3.0}, t) == doctest::Approx(0.25 * std::exp(-2.0 * t) * s * s).epsilon(1e-12));
}

TEST_CASE("unit order reduces to the damped sinusoid on [0, 20]") {
    const QuantumParams p{1.0, 1.0, 3.0};
    const QuantumModel model(p);
    for (int i = 0; i <= 2000; ++i) {
        const double t = 0.01 * i;
        const double s = std::sin(3.0 * t);
        CHECK(std::abs(model(t) - 0.25 * std::exp(-2.0 * t) * s * s) <= 1e-9);
    }
}

TEST_CASE("parameter validation") {
    CHECK(kind_of([] { b_qe({0.0, 1.0, 1.0}, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { b_qe({1.2, 1.0, 1.0}, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { b_qe({0.5, 0.0, 1.0}, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { b_qe({0.5, 1.0, -1.0}, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { b_qe({0.5, 1.0, 1.0}, -1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { n_qe({0.5, 1.0, 1.0}, 0.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { n_qe({0.5, 1.0, 1.0}, 10.0, 8); }) == ErrorKind::domain);
    CHECK(kind_of([] { n_qe({0.5, 1.0, 1e6}, 1e6, 64, 1000000); }) == ErrorKind::resource);
}

TEST_CASE("sampling grid size") {
    const QuantumParams p{0.5, 1.0, 5.0};
    CHECK(quantum_grid_intervals(p, 10.0, 64) == 1024);
    const double expected = std::ceil(64.0 * 5.0 * 1000.0 / (2.0 * M_PI));
    CHECK(quantum_grid_intervals(p, 1000.0, 64) == static_cast<std::size_t>(expected));
    const Trajectory traj = sample_bqe(p, 1000.0, 64);
    CHECK(traj.size() == static_cast<std::size_t>(expected) + 1);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 1000.0);
    CHECK(quantum_grid_intervals({0.5, 2.0, 0.0}, 100.0, 64) == 12800);
}

TEST_CASE("successive local maxima never grow") {
    for (double a : {0.2, 0.5, 0.8, 1.0}) {
        const Trajectory traj = sample_bqe({a, 1.0, 5.0}, 50.0, 64);
        double last = 1.0;
        for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
            const double v = traj.values[i];
            if (v > traj.values[i - 1] && v >= traj.values[i + 1]) {
                CHECK(v <= last * (1.0 + 1e-9));
                last = v;
            }
        }
    }
}

TEST_CASE("values stay in [0, 1/4]") {
    const Trajectory traj = sample_bqe({0.3, 1.0, 7.0}, 30.0, 64);
    for (double v : traj.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 0.25);
    }
}

TEST_CASE("no oscillation gives no revival") {
    for (double a : {0.2, 0.5, 1.0})
        CHECK(n_qe({a, 1.0, 0.0}, 200.0) == 0.0);
}

TEST_CASE("revival measure matches the analytic sum for exponential decay") {
    struct Case {
        double lambda, omega, horizon;
    };
    for (const Case& c : {Case{1.0, 2.0 * M_PI, 200.0}, Case{1.0, 3.0, 20.0}, Case{0.2, 5.0, 50.0},
                          Case{2.0, 7.0, 13.7}}) {
        const double ref = oracle::exponential_revival_sum(c.lambda, c.omega, c.horizon);
        const double got = n_qe({1.0, c.lambda, c.omega}, c.horizon);
        INFO("lambda=" << c.lambda << " omega=" << c.omega << " T=" << c.horizon);
        CHECK(std::abs(got - ref) <= 1e-9 * ref);
    }
}

TEST_CASE("revival measure grows with the horizon") {
    const QuantumParams p{0.4, 1.0, 5.0};
    double last = 0.0;
    for (double t : {5.0, 20.0, 80.0, 320.0}) {
        const double v = n_qe(p, t);
        CHECK(v >= last);
        last = v;
    }
}

TEST_CASE("slower envelopes revive more") {
    const double a3 = n_qe({0.3, 1.0, 5.0}, 200.0);
    const double a6 = n_qe({0.6, 1.0, 5.0}, 200.0);
    const double a9 = n_qe({0.9, 1.0, 5.0}, 200.0);
    CHECK(a3 > a6);
    CHECK(a6 > a9);
}

TEST_CASE("invariance under a common rescaling of rates and time") {
    for (double a : {0.3, 0.5, 0.8}) {
        const double base = n_qe({a, 1.0, 5.0}, 200.0);
        for (double c : {0.5, 3.0, 10.0}) {
            const double scaled = n_qe({a, c, 5.0 * c}, 200.0 / c);
            INFO("alpha=" << a << " c=" << c);
            CHECK(std::abs(scaled - base) <= 1e-8 * base);
        }
    }
}

TEST_CASE("refinement makes the result insensitive to sampling density") {
    for (double a : {0.3, 0.7}) {
        const NqeResult coarse = n_qe_detailed({a, 1.0, 5.0}, 500.0, 16);
        const NqeResult fine = n_qe_detailed({a, 1.0, 5.0}, 500.0, 64);
        CHECK(std::abs(coarse.value - fine.value) <= 1e-8 * fine.value);
        CHECK(fine.value >= fine.grid_value);
        CHECK(fine.refined > 0);
        CHECK(fine.exact_minima > 0);
        CHECK(fine.intervals > 0);
    }
}

TEST_CASE("stationarity function vanishes at the refined maxima") {
    const QuantumModel model({0.5, 1.0, 5.0});
    const double t0 = std::atan(5.0) / 5.0;
    double lo = t0 - 0.1, hi = t0 + 0.1;
    CHECK(model.stationarity(lo) * model.stationarity(hi) < 0.0);
    CHECK(model.fd_step() == doctest::Approx(2e-7));
}

TEST_CASE("horizon scaling fit") {
    SUBCASE("exact power law on synthetic values is recovered") {
        const auto h = log_spaced(10.0, 1000.0, 5);
        CHECK(h.size() == 5);
        CHECK(h.front() == 10.0);
        CHECK(h.back() == 1000.0);
        CHECK(h[2] == doctest::Approx(100.0));
    }
    SUBCASE("the exponential case saturates") {
        const HorizonScaling s = horizon_scaling({1.0, 1.0, 5.0}, {50.0, 100.0, 200.0});
        CHECK(std::abs(s.slope) <= 1e-6);
    }
    SUBCASE("errors") {
        CHECK(kind_of([] { horizon_scaling({1.0, 1.0, 0.0}, {10.0, 20.0}); }) == ErrorKind::degenerate);
        CHECK(kind_of([] { horizon_scaling({1.0, 1.0, 1.0}, {10.0}); }) == ErrorKind::domain);
        CHECK(kind_of([] { log_spaced(10.0, 1.0, 3); }) == ErrorKind::domain);
    }
}
