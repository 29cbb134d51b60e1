// cli.hpp: command-line front end
//
// Every subcommand accepts --config FILE with key=value lines using the long
// option names; flags given on the command line override file values.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace infoflow::cli {

// Union of every subcommand's parameters; each subcommand reads its own.
struct Options {
    // ml
    double x = 0.0;
    double tol = 1e-10;
    bool batch = false;

    // quantum
    double alpha = 0.5;
    double lambda = 1.0;
    double omega = 5.0;
    double horizon = 200.0;
    std::size_t ppp = 64;
    std::string scaling_horizons;

    // sweeps
    double alpha_min = 0.1;
    double alpha_max = 1.0;
    std::size_t alpha_n = 33;
    double ratio_min = 0.5;
    double ratio_max = 20.0;
    std::size_t ratio_n = 33;
    std::size_t workers = 0;
    std::string boundary = "gradient";
    double level = 0.5;

    // alpha-sweep
    double sweep_alpha_min = 0.3;
    double sweep_alpha_max = 1.0;
    std::size_t sweep_alpha_n = 8;
    std::string initial_states = "1,0,0";
    std::string sweep_metric = "n_dkl";
    std::string horizons = "10,100,1000";
    std::size_t sweep_steps = 20000;

    // classical
    std::string model = "markov";
    std::string k_file;
    std::string p0 = "1,0,0";
    double classical_horizon = 10.0;
    std::size_t steps = 1000;
    double gamma = 2.0;
    std::uint64_t ntraj = 100000;
    std::uint64_t seed = 1;
    std::string phase_start = "fresh";
    std::string metric = "delta_h";
    std::size_t resolution = 40;
    double epsilon = -1.0;
    bool interior = false;
    bool bits = false;

    // backflow
    std::string input;
    double backflow_epsilon = 0.0;

    // output
    std::string output_dir;
    std::string name;
    std::string format = "csv,json";
    bool to_stdout = false;
};

struct RunConfig {
    std::string subcommand;
    Options options;
    // Every option of the subcommand with its resolved value, as strings.
    nlohmann::json resolved = nlohmann::json::object();
    std::filesystem::path output_dir;
    bool csv = true;
    bool json = true;
    bool svg = false;
    bool help = false;
    std::string help_text;
};

// args[0] is the program name. Throws Error(usage) for unknown subcommands,
// unknown keys (command line or config file) and malformed values.
RunConfig parse_config(const std::vector<std::string>& args);

// Runs one command. Returns the process exit code; failures print a single
// line "error: <category>: <message>" to err.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace infoflow::cli
