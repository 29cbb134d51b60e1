#include "infoflow/cli.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace infoflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("infoflow_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::vector<std::string>& args, const std::string& input = "") {
    std::vector<std::string> full{"infoflow"};
    full.insert(full.end(), args.begin(), args.end());
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(full, in, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("numbers round-trip") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0})
        CHECK(std::strtod(io::format_number(x).c_str(), nullptr) == x);
}

TEST_CASE("trajectory CSV") {
    const Trajectory t{{0.0, 0.5}, {1.0, 0.25}};
    CHECK(io::trajectory_csv(t, "b_qe") == "t,b_qe\n0,1\n0.5,0.25\n");
    const Trajectory back = io::read_trajectory_csv(io::trajectory_csv(t));
    CHECK(back.times == t.times);
    CHECK(back.values == t.values);
    const Trajectory raw = io::read_trajectory_csv("# comment\n0,1\n\n1, 2\n");
    CHECK(raw.values == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(io::read_trajectory_csv("t,I\n0,1\nx,2\n"), Error);
}

TEST_CASE("probability trajectory CSV") {
    ProbTrajectory p;
    p.times = {0.0};
    p.states = {SimplexPoint(1, 0, 0)};
    CHECK(io::prob_trajectory_csv(p) == "t,p1,p2,p3\n0,1,0,0\n");
    p.standard_errors = {{0.0, 0.0, 0.0}};
    CHECK(io::prob_trajectory_csv(p) == "t,p1,p2,p3,se1,se2,se3\n0,1,0,0,0,0,0\n");
}

TEST_CASE("phase grid CSV layout and round trip") {
    PhaseGrid g(Axis{"a", {0.0, 1.0}}, Axis{"b", {2.0, 3.0}});
    g.values = {1.0, 2.0, 3.0, 0.0};
    CHECK(io::phase_grid_csv(g) == "a\\b,2,3\n0,1,2\n1,3,0\n");
    g.valid = {1, 1, 1, 0};
    const std::string csv = io::phase_grid_csv(g);
    CHECK(csv == "a\\b,2,3\n0,1,2\n1,3,\n");
    const PhaseGrid back = io::read_phase_grid_csv(csv);
    CHECK(back.axis1.name == "a");
    CHECK(back.axis2.values == g.axis2.values);
    CHECK(back.values == g.values);
    CHECK(back.valid == g.valid);
    const auto j = io::phase_grid_json(g);
    CHECK(j["shape"] == nlohmann::json::array({2, 2}));
}

TEST_CASE("backflow JSON") {
    BackflowResult r;
    r.n_i = 2.5;
    r.intervals = {{0.0, 1.0, 1.0, 0, 1}, {2.0, 3.0, 1.5, 2, 3}};
    const auto j = io::backflow_json(r);
    CHECK(j["n_i"] == 2.5);
    CHECK(j["intervals"].size() == 2);
    CHECK(j["intervals"][1]["rise"] == 1.5);
}

TEST_CASE("generator and point parsing") {
    const Matrix3 k = io::parse_generator("# desk\n-1.25 2 0.5\n1, -3, 1\n0.25 1 -1.5\n");
    CHECK(k(0, 1) == 2.0);
    CHECK(k(2, 0) == 0.25);
    CHECK_THROWS_AS(io::parse_generator("1 2 3\n4 5 6\n"), Error);
    const SimplexPoint p = io::parse_simplex_point("0.2, 0.3,0.5");
    CHECK(p[1] == 0.3);
    CHECK_THROWS_AS(io::parse_simplex_point("0.2,0.3"), Error);
    CHECK_THROWS_AS(io::parse_simplex_point("0.5,0.5,0.5"), Error);
}

TEST_CASE("SVG heatmap") {
    PhaseGrid g(Axis{"a", {0.0, 1.0}}, Axis{"b", {2.0, 3.0}});
    g.values = {0.0, 1.0, 2.0, 3.0};
    g.valid = {1, 1, 1, 0};
    const std::string svg = io::svg_heatmap(g, "title");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("title") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("files") {
    const fs::path dir = scratch("files");
    io::write_file(dir / "nested" / "x.txt", "hello");
    CHECK(io::read_file(dir / "nested" / "x.txt") == "hello");
    try {
        io::read_file(dir / "missing.txt");
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
        CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
    }
}

TEST_CASE("configuration precedence") {
    const fs::path dir = scratch("config");
    io::write_file(dir / "run.cfg", "# quantum\nhorizon = 200\nalpha=0.3\npoints_per_period=32\n");
    CHECK_THROWS_AS(cli::parse_config({"infoflow", "quantum-nqe", "--config", (dir / "run.cfg").string()}), Error);

    io::write_file(dir / "run.cfg", "# quantum\nhorizon = 200\nalpha=0.3\nppp=32\n");
    const auto a = cli::parse_config({"infoflow", "quantum-nqe", "--config", (dir / "run.cfg").string()});
    CHECK(a.options.horizon == 200.0);
    CHECK(a.options.alpha == 0.3);
    CHECK(a.options.ppp == 32);
    const auto b = cli::parse_config(
        {"infoflow", "quantum-nqe", "--config", (dir / "run.cfg").string(), "--horizon", "50"});
    CHECK(b.options.horizon == 50.0);
    CHECK(b.options.alpha == 0.3);
    CHECK(b.resolved["horizon"] == "50");

    try {
        cli::parse_config({"infoflow", "quantum-nqe", "--omega-lambda", "3"});
        FAIL("expected a usage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::usage);
    }
    CHECK_THROWS_AS(cli::parse_config({"infoflow", "teleport"}), Error);
    CHECK_THROWS_AS(cli::parse_config({"infoflow", "quantum-nqe", "--format", "xml"}), Error);
}

TEST_CASE("output directory resolution") {
    ::setenv("INFOFLOW_OUTPUT_DIR", "/tmp/from_env", 1);
    CHECK(cli::parse_config({"infoflow", "quantum-traj"}).output_dir == fs::path("/tmp/from_env"));
    CHECK(cli::parse_config({"infoflow", "quantum-traj", "--output-dir", "here"}).output_dir == fs::path("here"));
    ::unsetenv("INFOFLOW_OUTPUT_DIR");
    CHECK(cli::parse_config({"infoflow", "quantum-traj"}).output_dir == fs::path("."));
}

TEST_CASE("commands and exit codes") {
    const fs::path dir = scratch("run");
    SUBCASE("ml") {
        const Outcome o = run_cli({"ml", "--alpha", "0.5", "--x", "1"});
        CHECK(o.code == 0);
        CHECK(std::abs(std::strtod(o.out.c_str(), nullptr) - 0.42758357615580700) <= 1e-12);
        const Outcome batch = run_cli({"ml", "--batch"}, "1 1\n0.5 0\n");
        CHECK(batch.code == 0);
        CHECK(batch.out.find("\n1\n") != std::string::npos);
    }
    SUBCASE("domain errors") {
        const Outcome o = run_cli({"ml", "--alpha", "1.5", "--x", "1"});
        CHECK(o.code == 3);
        CHECK(o.err.rfind("error: domain: ", 0) == 0);
        CHECK(o.err.find('\n') == o.err.size() - 1);
    }
    SUBCASE("usage errors") {
        const Outcome o = run_cli({"quantum-nqe", "--bogus"});
        CHECK(o.code == 2);
        CHECK(o.err.rfind("error: usage: ", 0) == 0);
    }
    SUBCASE("resource errors") {
        const Outcome o = run_cli({"quantum-nqe", "--omega", "1e9", "--horizon", "1e9"});
        CHECK(o.code == 5);
    }
    SUBCASE("spectrum errors") {
        io::write_file(dir / "cycle.txt", "-1 0 1\n1 -1 0\n0 1 -1\n");
        const Outcome o = run_cli({"classical-traj", "--model", "fractional", "--alpha", "0.5", "--k-file",
                                   (dir / "cycle.txt").string(), "--output-dir", dir.string()});
        CHECK(o.code == 7);
    }
    SUBCASE("io errors") {
        const Outcome o = run_cli({"backflow", "--input", (dir / "none.csv").string()});
        CHECK(o.code == 10);
    }
    SUBCASE("trajectory files and backflow round trip") {
        const Outcome t = run_cli({"quantum-traj", "--alpha", "1", "--omega", "3", "--horizon", "5",
                                   "--output-dir", dir.string()});
        CHECK(t.code == 0);
        CHECK(fs::exists(dir / "quantum_traj.csv"));
        const auto meta = nlohmann::json::parse(io::read_file(dir / "quantum_traj.json"));
        CHECK(meta["config"]["alpha"] == "1");
        CHECK(meta["rerun"].get<std::string>().rfind("infoflow quantum-traj", 0) == 0);
        const Outcome b = run_cli({"backflow", "--input", (dir / "quantum_traj.csv").string()});
        CHECK(b.code == 0);
        const auto j = nlohmann::json::parse(b.out);
        CHECK(j["n_i"].get<double>() > 0.0);
    }
    SUBCASE("map outputs") {
        const Outcome m = run_cli({"classical-map", "--resolution", "4", "--steps", "50", "--metric", "n_dkl",
                                   "--format", "csv,json,svg", "--output-dir", dir.string(), "--name", "m"});
        CHECK(m.code == 0);
        CHECK(fs::exists(dir / "m.csv"));
        CHECK(fs::exists(dir / "m.svg"));
        const PhaseGrid g = io::read_phase_grid_csv(io::read_file(dir / "m.csv"));
        CHECK(g.rows() == 5);
        CHECK_FALSE(g.is_valid(4, 4));
    }
}
