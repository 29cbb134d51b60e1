#include "infoflow/cli.hpp"

#include "infoflow/backflow.hpp"
#include "infoflow/classical.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/info_measures.hpp"
#include "infoflow/io.hpp"
#include "infoflow/mittag_leffler.hpp"
#include "infoflow/quantum.hpp"
#include "infoflow/sweeps.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace infoflow::cli {

namespace {

using Json = nlohmann::json;

const char* const software_version = INFOFLOW_VERSION;

template <class T>
CLI::Option* option(CLI::App* sub, const std::string& flag, T& var, const std::string& help) {
    return sub->add_option(flag, var, help)->capture_default_str()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

CLI::Option* flag(CLI::App* sub, const std::string& name, bool& var, const std::string& help) {
    return sub->add_flag(name, var, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void output_options(CLI::App* sub, Options& o, bool stdout_flag) {
    sub->add_option("--config", "key=value file; command-line flags take precedence");
    option(sub, "--output-dir", o.output_dir, "output directory (default: $INFOFLOW_OUTPUT_DIR or .)");
    option(sub, "--name", o.name, "output file stem (default: subcommand name)");
    option(sub, "--format", o.format, "comma-separated subset of csv,json,svg");
    if (stdout_flag)
        flag(sub, "--stdout", o.to_stdout, "print CSV to standard output instead of writing files");
}

void quantum_options(CLI::App* sub, Options& o) {
    option(sub, "--alpha", o.alpha, "fractional order in (0, 1]");
    option(sub, "--lambda", o.lambda, "dissipative rate > 0");
    option(sub, "--omega", o.omega, "angular frequency >= 0");
    option(sub, "--horizon", o.horizon, "time horizon");
    option(sub, "--ppp", o.ppp, "grid points per oscillation period (>= 16)");
}

void memory_options(CLI::App* sub, Options& o) {
    option(sub, "--model", o.model, "markov | gme | erlang2 | erlang2-mc | fractional");
    option(sub, "--k-file", o.k_file, "generator file (3 rows, K(i,j) = rate j -> i); default generator if empty");
    option(sub, "--horizon", o.classical_horizon, "time horizon");
    option(sub, "--steps", o.steps, "number of uniform time steps");
    option(sub, "--gamma", o.gamma, "memory rate of the exponential kernel (gme)");
    option(sub, "--alpha", o.alpha, "fractional order (fractional)");
    option(sub, "--ntraj", o.ntraj, "Monte Carlo trajectories (erlang2-mc)");
    option(sub, "--seed", o.seed, "Monte Carlo seed (erlang2-mc)");
    option(sub, "--phase-start", o.phase_start, "Erlang-2 initial phases: fresh | stationary");
}

struct App {
    CLI::App app{"Information backflow: Mittag-Leffler envelopes, revival measures and classical memory models",
                 "infoflow"};
    Options o;
};

void build(App& a) {
    CLI::App& app = a.app;
    Options& o = a.o;
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(software_version));

    auto* ml = app.add_subcommand("ml", "evaluate E_alpha(-x); --batch reads 'alpha x' pairs from stdin");
    option(ml, "--alpha", o.alpha, "order in (0, 1]");
    option(ml, "--x", o.x, "argument x >= 0; evaluates E_alpha(-x)");
    option(ml, "--tol", o.tol, "relative tolerance");
    flag(ml, "--batch", o.batch, "read whitespace-separated (alpha, x) pairs from stdin");
    ml->add_option("--config", "key=value file; command-line flags take precedence");

    auto* qt = app.add_subcommand("quantum-traj", "sample b_qe(t) on [0, horizon]; CSV (t, b_qe)");
    quantum_options(qt, o);
    output_options(qt, o, true);

    auto* qn = app.add_subcommand("quantum-nqe", "revival measure N_qe at a finite horizon");
    quantum_options(qn, o);
    option(qn, "--scaling-horizons", o.scaling_horizons,
         "comma-separated horizons; adds the log-log slope of N_qe(T)");
    output_options(qn, o, false);

    auto* qp = app.add_subcommand("quantum-phase", "N_qe over the (alpha, omega/lambda) plane");
    option(qp, "--alpha-min", o.alpha_min, "smallest alpha");
    option(qp, "--alpha-max", o.alpha_max, "largest alpha");
    option(qp, "--alpha-n", o.alpha_n, "number of alpha values");
    option(qp, "--ratio-min", o.ratio_min, "smallest omega/lambda");
    option(qp, "--ratio-max", o.ratio_max, "largest omega/lambda");
    option(qp, "--ratio-n", o.ratio_n, "number of omega/lambda values");
    option(qp, "--horizon", o.horizon, "horizon in units of 1/lambda");
    option(qp, "--ppp", o.ppp, "grid points per oscillation period (>= 16)");
    option(qp, "--workers", o.workers, "worker threads (0: hardware concurrency)");
    option(qp, "--boundary", o.boundary, "boundary extraction: gradient | level");
    option(qp, "--level", o.level, "level fraction for --boundary level");
    output_options(qp, o, false);

    auto* ct = app.add_subcommand("classical-traj", "propagate p(t); CSV (t, p1, p2, p3[, se1, se2, se3])");
    memory_options(ct, o);
    option(ct, "--p0", o.p0, "initial distribution a,b,c");
    output_options(ct, o, true);

    auto* cm = app.add_subcommand("classical-map", "metric over initial conditions on the simplex");
    memory_options(cm, o);
    option(cm, "--metric", o.metric, "delta_h | n_h | n_dkl");
    option(cm, "--resolution", o.resolution, "lattice resolution n (>= 4)");
    option(cm, "--epsilon", o.epsilon, "backflow threshold (< 0: 0, or 3x pooled SE for erlang2-mc)");
    flag(cm, "--interior", o.interior, "skip lattice points on the simplex boundary");
    flag(cm, "--bits", o.bits, "report entropies in bits");
    option(cm, "--workers", o.workers, "worker threads (0: hardware concurrency)");
    output_options(cm, o, false);

    auto* as = app.add_subcommand("alpha-sweep", "fractional model metric versus alpha");
    option(as, "--k-file", o.k_file, "generator file; default generator if empty");
    option(as, "--alpha-min", o.sweep_alpha_min, "smallest alpha");
    option(as, "--alpha-max", o.sweep_alpha_max, "largest alpha");
    option(as, "--alpha-n", o.sweep_alpha_n, "number of alpha values");
    option(as, "--initial-states", o.initial_states, "';'-separated list of a,b,c");
    option(as, "--metric", o.sweep_metric, "delta_h | n_h | n_dkl");
    option(as, "--horizons", o.horizons, "comma-separated increasing horizons");
    option(as, "--steps", o.sweep_steps, "time steps per horizon");
    flag(as, "--bits", o.bits, "report entropies in bits");
    option(as, "--workers", o.workers, "worker threads (0: hardware concurrency)");
    output_options(as, o, false);

    auto* bf = app.add_subcommand("backflow", "backflow functional of a (t, I) CSV trace; prints JSON");
    option(bf, "--input", o.input, "CSV file with columns t, I")->required();
    option(bf, "--epsilon", o.backflow_epsilon, "per-interval rise threshold >= 0");
    bf->add_option("--config", "key=value file; command-line flags take precedence");
}

std::string normalize_key(std::string key) {
    for (char& c : key)
        if (c == '_')
            c = '-';
    return key;
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key=value lines, '#' comments.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::istringstream is(io::read_file(path));
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = strip(line);
        if (line.empty() || line.front() == '[')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << path << ":" << n << ": expected key=value";
            fail(ErrorKind::usage, os.str());
        }
        out.emplace_back(normalize_key(strip(line.substr(0, eq))), unquote(strip(line.substr(eq + 1))));
    }
    return out;
}

std::string single_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    return strip(s);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (item.empty())
            continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            fail(ErrorKind::usage, "bad number '" + item + "' in " + what);
        out.push_back(v);
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    App a;
    build(a);
    RunConfig cfg;

    // Locate the subcommand and an optional config file.
    std::string sub_name;
    std::string config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& s = args[i];
        if (sub_name.empty() && !s.empty() && s.front() != '-') {
            sub_name = s;
            continue;
        }
        if (s == "--config") {
            if (i + 1 >= args.size())
                fail(ErrorKind::usage, "--config needs a file argument");
            config_path = args[++i];
            continue;
        }
        if (s.rfind("--config=", 0) == 0) {
            config_path = s.substr(9);
            continue;
        }
        rest.push_back(s);
    }

    std::vector<std::string> argv{args.empty() ? "infoflow" : args[0]};
    if (!sub_name.empty())
        argv.push_back(sub_name);
    if (!config_path.empty()) {
        CLI::App* sub = sub_name.empty() ? nullptr : a.app.get_subcommand_no_throw(sub_name);
        if (sub == nullptr)
            fail(ErrorKind::usage, "--config needs a known subcommand");
        for (const auto& [key, value] : read_config_file(config_path)) {
            const CLI::Option* opt = sub->get_option_no_throw("--" + key);
            if (opt == nullptr || key == "config" || key == "help")
                fail(ErrorKind::usage, "unknown key '" + key + "' in config file " + config_path +
                                           " for subcommand " + sub_name);
            argv.push_back("--" + key + "=" + value);
        }
    }
    argv.insert(argv.end(), rest.begin(), rest.end());

    std::vector<const char*> cargv;
    for (const auto& s : argv)
        cargv.push_back(s.c_str());
    try {
        a.app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        cfg.help = true;
        const auto subs = a.app.get_subcommands();
        cfg.help_text = subs.empty() ? a.app.help() : subs.front()->help();
        return cfg;
    } catch (const CLI::CallForVersion&) {
        cfg.help = true;
        cfg.help_text = std::string(software_version) + "\n";
        return cfg;
    } catch (const CLI::ParseError& e) {
        fail(ErrorKind::usage, single_line(e.what()));
    }

    CLI::App* sub = a.app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    cfg.options = a.o;
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string key = opt->get_single_name();
        if (key.empty() || key == "help" || key == "config")
            continue;
        if (opt->count() > 0)
            cfg.resolved[key] = opt->as<std::string>();
        else if (opt->get_type_size() == 0)
            cfg.resolved[key] = "false";
        else
            cfg.resolved[key] = opt->get_default_str();
    }
    if (!config_path.empty())
        cfg.resolved["config"] = config_path;

    const Options& o = cfg.options;
    if (!o.output_dir.empty()) {
        cfg.output_dir = o.output_dir;
    } else if (const char* env = std::getenv("INFOFLOW_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        cfg.output_dir = env;
    } else {
        cfg.output_dir = ".";
    }
    cfg.csv = cfg.json = cfg.svg = false;
    std::stringstream fs(o.format);
    std::string f;
    while (std::getline(fs, f, ',')) {
        f = strip(f);
        if (f == "csv")
            cfg.csv = true;
        else if (f == "json")
            cfg.json = true;
        else if (f == "svg")
            cfg.svg = true;
        else if (!f.empty())
            fail(ErrorKind::usage, "--format: unknown output format '" + f + "' (expected csv, json, svg)");
    }
    if (cfg.options.name.empty()) {
        cfg.options.name = cfg.subcommand;
        for (char& c : cfg.options.name)
            if (c == '-')
                c = '_';
    }
    return cfg;
}

namespace {

struct Context {
    const RunConfig& cfg;
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    const Options& o() const { return cfg.options; }
    std::filesystem::path path(const std::string& suffix) const {
        return cfg.output_dir / (cfg.options.name + suffix);
    }

    Json meta() const {
        std::string rerun = "infoflow " + cfg.subcommand;
        for (const auto& [k, v] : cfg.resolved.items()) {
            if (k == "config")
                continue;
            const std::string s = v.get<std::string>();
            if (s == "false" || s.empty())
                continue;
            rerun += " --" + k;
            if (s != "true")
                rerun += " '" + s + "'";
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return {{"software", "infoflow"},
                {"version", software_version},
                {"subcommand", cfg.subcommand},
                {"config", cfg.resolved},
                {"rerun", rerun},
                {"wall_time_seconds", wall}};
    }

    void write(const std::string& suffix, const std::string& content) const {
        const auto p = path(suffix);
        io::write_file(p, content);
        out << p.string() << "\n";
    }

    void write_json(const Json& j) const {
        if (cfg.json)
            write(".json", j.dump(2) + "\n");
    }
};

Generator3 load_generator(const std::string& file) {
    if (file.empty())
        return Generator3::desk_default();
    return Generator3(io::parse_generator(io::read_file(file)));
}

MemoryConfig memory_config(const Options& o) {
    MemoryConfig m;
    m.kind = parse_memory_kind(o.model);
    m.gamma = o.gamma;
    m.alpha = o.alpha;
    m.n_traj = o.ntraj;
    m.seed = o.seed;
    m.phase_start = parse_phase_start(o.phase_start);
    m.validate();
    return m;
}

Json generator_json(const Generator3& gen) {
    Json rows = Json::array();
    for (int i = 0; i < 3; ++i)
        rows.push_back({gen.rates()(i, 0), gen.rates()(i, 1), gen.rates()(i, 2)});
    return {{"rates", rows},
            {"convention", "dp/dt = K p, K(i,j) = rate j -> i"},
            {"stationary", {gen.pi()[0], gen.pi()[1], gen.pi()[2]}}};
}

void rescale_bits(PhaseGrid& grid) {
    for (double& v : grid.values)
        v = to_bits(v);
    grid.meta["units"] = "bits";
}

QuantumParams quantum_params(const Options& o) {
    QuantumParams p{o.alpha, o.lambda, o.omega};
    p.validate();
    if (o.ppp < min_points_per_period)
        fail(ErrorKind::usage, "--ppp must be >= " + std::to_string(min_points_per_period));
    if (!(o.horizon > 0.0))
        fail(ErrorKind::usage, "--horizon must be positive");
    return p;
}

int cmd_ml(const Context& c) {
    const Options& o = c.o();
    if (!o.batch) {
        const double v = ml::ml_neg({o.alpha, o.x, o.tol});
        c.out << io::format_number(v) << "\n";
        return 0;
    }
    std::string tok_a, tok_x;
    while (c.in >> tok_a) {
        if (!(c.in >> tok_x))
            fail(ErrorKind::usage, "batch input ended with an unpaired value");
        char* end = nullptr;
        const double a = std::strtod(tok_a.c_str(), &end);
        if (*end != '\0')
            fail(ErrorKind::usage, "bad alpha '" + tok_a + "' in batch input");
        const double x = std::strtod(tok_x.c_str(), &end);
        if (*end != '\0')
            fail(ErrorKind::usage, "bad x '" + tok_x + "' in batch input");
        c.out << io::format_number(ml::ml_neg({a, x, o.tol})) << "\n";
    }
    return 0;
}

int cmd_quantum_traj(const Context& c) {
    const Options& o = c.o();
    const QuantumParams p = quantum_params(o);
    const Trajectory traj = sample_bqe(p, o.horizon, o.ppp);
    const std::string csv = io::trajectory_csv(traj, "b_qe");
    if (o.to_stdout) {
        c.out << csv;
        return 0;
    }
    if (c.cfg.csv)
        c.write(".csv", csv);
    Json j = c.meta();
    j["samples"] = traj.size();
    j["columns"] = {"t [1/lambda units of time]", "b_qe [dimensionless]"};
    c.write_json(j);
    return 0;
}

int cmd_quantum_nqe(const Context& c) {
    const Options& o = c.o();
    const QuantumParams p = quantum_params(o);
    const NqeResult r = n_qe_detailed(p, o.horizon, o.ppp);
    c.out << io::format_number(r.value) << "\n";
    Json j = c.meta();
    j["n_qe"] = r.value;
    j["horizon"] = r.horizon;
    j["grid_points"] = r.grid_points;
    j["points_per_period"] = r.points_per_period;
    j["rising_intervals"] = r.intervals;
    j["refined_extrema"] = r.refined;
    j["exact_minima"] = r.exact_minima;
    j["unrefined_value"] = r.grid_value;
    if (!o.scaling_horizons.empty()) {
        const HorizonScaling s = horizon_scaling(p, parse_number_list(o.scaling_horizons, "--scaling-horizons"), o.ppp);
        j["scaling"] = {{"horizons", s.horizons}, {"n_qe", s.values}, {"slope", s.slope}, {"intercept", s.intercept}};
        c.out << "slope " << io::format_number(s.slope) << "\n";
    }
    c.write_json(j);
    return 0;
}

Json boundary_json(const std::vector<BoundaryPoint>& pts) {
    Json arr = Json::array();
    double sum = 0.0, sharp = 0.0, at = 0.0;
    for (const auto& b : pts) {
        arr.push_back({{"axis2", b.axis2}, {"axis1", b.axis1}, {"gradient", b.gradient}});
        sum += b.axis1;
        if (b.gradient > sharp) {
            sharp = b.gradient;
            at = b.axis1;
        }
    }
    Json j = {{"points", arr}};
    if (!pts.empty()) {
        j["mean_axis1"] = sum / static_cast<double>(pts.size());
        j["max_gradient"] = sharp;
        j["max_gradient_axis1"] = at;
    }
    return j;
}

void write_grid(const Context& c, const PhaseGrid& grid, const std::string& suffix, const std::string& title,
                Json extra) {
    if (c.cfg.csv)
        c.write(suffix + ".csv", io::phase_grid_csv(grid));
    if (c.cfg.svg)
        c.write(suffix + ".svg", io::svg_heatmap(grid, title));
    if (c.cfg.json) {
        Json j = c.meta();
        j["grid"] = io::phase_grid_json(grid);
        for (auto& [k, v] : extra.items())
            j[k] = v;
        c.write(suffix + ".json", j.dump(2) + "\n");
    }
}

int cmd_quantum_phase(const Context& c) {
    const Options& o = c.o();
    QuantumSweepConfig q;
    q.alpha = linear_axis("alpha", o.alpha_min, o.alpha_max, o.alpha_n);
    q.ratio = linear_axis("omega_over_lambda", o.ratio_min, o.ratio_max, o.ratio_n);
    q.horizon = o.horizon;
    q.points_per_period = o.ppp;
    q.workers = o.workers;
    if (o.ppp < min_points_per_period)
        fail(ErrorKind::usage, "--ppp must be >= " + std::to_string(min_points_per_period));
    const BoundaryMode mode = parse_boundary_mode(o.boundary);
    const PhaseGrid grid = quantum_phase_diagram(q);
    Json extra = Json::object();
    try {
        extra["boundary"] = boundary_json(boundary_extract(grid, mode, o.level));
        extra["boundary"]["mode"] = std::string(to_string(mode));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate)
            throw;
        extra["boundary"] = {{"mode", std::string(to_string(mode))}, {"error", e.what()}};
    }
    write_grid(c, grid, "", "N_qe over (alpha, omega/lambda)", extra);
    return 0;
}

int cmd_classical_traj(const Context& c) {
    const Options& o = c.o();
    const Generator3 gen = load_generator(o.k_file);
    const MemoryConfig m = memory_config(o);
    const SimplexPoint p0 = io::parse_simplex_point(o.p0);
    const ProbTrajectory traj = propagate(gen, m, p0, uniform_grid(o.classical_horizon, o.steps));
    if (traj.clipped > 0)
        c.err << "warning: " << traj.clipped << " samples had round-off negative probabilities clipped to 0\n";
    const std::string csv = io::prob_trajectory_csv(traj);
    if (o.to_stdout) {
        c.out << csv;
        return 0;
    }
    if (c.cfg.csv)
        c.write(".csv", csv);
    Json j = c.meta();
    j["generator"] = generator_json(gen);
    j["samples"] = traj.size();
    j["clipped_samples"] = traj.clipped;
    c.write_json(j);
    return 0;
}

int cmd_classical_map(const Context& c) {
    const Options& o = c.o();
    const Generator3 gen = load_generator(o.k_file);
    SimplexMapConfig s;
    s.memory = memory_config(o);
    s.metric = parse_metric(o.metric);
    s.resolution = o.resolution;
    s.horizon = o.classical_horizon;
    s.steps = o.steps;
    s.epsilon = o.epsilon;
    s.include_boundary = !o.interior;
    s.workers = o.workers;
    PhaseGrid grid = simplex_map(gen, s);
    if (o.bits)
        rescale_bits(grid);
    write_grid(c, grid, "", std::string(to_string(s.metric)) + " over the simplex (p1, p2)",
               {{"generator", generator_json(gen)}});
    return 0;
}

int cmd_alpha_sweep(const Context& c) {
    const Options& o = c.o();
    const Generator3 gen = load_generator(o.k_file);
    AlphaSweepConfig s;
    s.alpha = linear_axis("alpha", o.sweep_alpha_min, o.sweep_alpha_max, o.sweep_alpha_n);
    s.initial_states.clear();
    std::stringstream ss(o.initial_states);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!strip(item).empty())
            s.initial_states.push_back(io::parse_simplex_point(strip(item)));
    s.metric = parse_metric(o.sweep_metric);
    s.horizons = parse_number_list(o.horizons, "--horizons");
    s.steps = o.sweep_steps;
    s.workers = o.workers;
    AlphaSweep r = classical_alpha_sweep(gen, s);
    if (o.bits) {
        rescale_bits(r.metric);
        for (auto& g : r.growth)
            rescale_bits(g);
    }

    Json declines = Json::array();
    for (std::size_t k = 0; k < s.initial_states.size(); ++k) {
        std::vector<double> profile;
        for (std::size_t a = 0; a < r.metric.rows(); ++a)
            profile.push_back(r.metric.at(a, k));
        const auto d = steepest_decline(r.metric.axis1.values, profile);
        if (d)
            declines.push_back({{"location", d->location}, {"slope", d->slope}});
        else
            declines.push_back({{"location", nullptr}, {"note", "profile flat"}});
    }
    write_grid(c, r.metric, "", std::string(to_string(s.metric)) + " versus alpha",
               {{"steepest_decline", declines}, {"generator", generator_json(gen)}});
    for (std::size_t k = 0; k < r.growth.size(); ++k)
        write_grid(c, r.growth[k], "_growth_" + std::to_string(k), "growth across horizons", Json::object());
    return 0;
}

int cmd_backflow(const Context& c) {
    const Options& o = c.o();
    if (!(o.backflow_epsilon >= 0.0))
        fail(ErrorKind::usage, "--epsilon must be >= 0");
    const Trajectory traj = io::read_trajectory_csv(io::read_file(o.input));
    const BackflowResult r = backflow_functional(traj, o.backflow_epsilon);
    c.out << io::backflow_json(r).dump(2) << "\n";
    return 0;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return 2;
    case ErrorKind::domain: return 3;
    case ErrorKind::convergence: return 4;
    case ErrorKind::resource: return 5;
    case ErrorKind::degenerate: return 6;
    case ErrorKind::spectrum: return 7;
    case ErrorKind::numerical: return 8;
    case ErrorKind::step_size: return 9;
    case ErrorKind::io: return 10;
    }
    return 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = parse_config(args);
        if (cfg.help) {
            out << cfg.help_text;
            return 0;
        }
        const Context c{cfg, in, out, err};
        const std::string& s = cfg.subcommand;
        if (s == "ml") return cmd_ml(c);
        if (s == "quantum-traj") return cmd_quantum_traj(c);
        if (s == "quantum-nqe") return cmd_quantum_nqe(c);
        if (s == "quantum-phase") return cmd_quantum_phase(c);
        if (s == "classical-traj") return cmd_classical_traj(c);
        if (s == "classical-map") return cmd_classical_map(c);
        if (s == "alpha-sweep") return cmd_alpha_sweep(c);
        if (s == "backflow") return cmd_backflow(c);
        fail(ErrorKind::usage, "unknown subcommand '" + s + "'");
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << single_line(e.what()) << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: internal: " << single_line(e.what()) << "\n";
        return 1;
    }
}

} // namespace infoflow::cli
