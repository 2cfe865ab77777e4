#pragma once
// Named experiments behind the busemann_lab command line.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace blab::cli {

// Invalid configuration; maps to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string experiment;
    std::optional<double> alpha;         // empty: experiment default
    std::vector<double> rho;             // empty: experiment default
    std::optional<std::int64_t> window;  // row length or bulk width
    std::optional<std::int32_t> rows;    // lattice height where relevant
    std::optional<std::int64_t> burn_in;
    std::optional<std::size_t> samples;  // replicas, draws or trials
    std::optional<int> n;                // tuple or matrix size
    std::uint64_t seed = 1;
    std::string out;  // empty: stdout
    std::string format = "json";
    int threads = 0;  // 0: BUSEMANN_LAB_THREADS or the OpenMP default
};

struct Check {
    std::string name;
    std::string anchor;  // the identity or law being exercised
    double value = 0.0;
    std::string relation;  // "<", ">", "==" or "within_factor"
    double threshold = 0.0;
    bool pass = false;
};

struct Report {
    ExperimentConfig config;  // with defaults resolved
    std::vector<Check> checks;
    std::map<std::string, std::vector<double>> series;  // plot-ready columns
    double wall_seconds = 0.0;
    bool all_pass() const;
};

const std::vector<std::string>& experiment_names();

// Fills in per-experiment defaults and checks preconditions. Throws ConfigError.
ExperimentConfig resolve(ExperimentConfig config);

// Runs a resolved config. Numerical failures propagate as exceptions.
Report run_experiment(const ExperimentConfig& config);

nlohmann::ordered_json to_json(const Report& report);
std::string to_csv(const Report& report);

// Resolve, run and write the report. Returns the process exit code.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace blab::cli
