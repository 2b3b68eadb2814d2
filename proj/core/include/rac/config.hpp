#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rac/sim.hpp"

namespace rac {

/// Flat configuration mirroring the JSON config file: one key per field,
/// command-line flags override file values. All randomness downstream flows
/// from plant_seed and weight_seed_base.
struct Config {
    // architecture
    int n = 10;
    int num_blocks = 20;
    int hidden_layers_per_block = 1;
    int width = 10;
    std::string activation = "tanh";
    bool shortcut = true;
    double init_low = -0.05;
    double init_high = 0.05;

    // control and adaptation
    double sigma_e = 2.0;
    double sigma_s = 2.0;
    double sigma_theta = 0.0;
    double gamma = 1.0;
    std::string law = "sliding";

    // plant source
    std::uint64_t plant_seed = 1;
    bool realizable = false;
    double theta_star_low = -0.2;
    double theta_star_high = 0.2;
    std::string plant_file;
    bool per_run_plants = false;

    // integration and logging
    double dt = 1e-3;
    double horizon_s = 10.0;
    std::string integrator = "euler";
    double boundary_layer = 0.0;
    int log_decimation = 1;
    double snapshot_period_s = 0.1;
    std::vector<int> snapshot_indices;  // empty selects 10 spread indices

    // batch protocol
    int runs = 100;
    std::uint64_t weight_seed_base = 1000;
};

/// Parses a flat JSON object. Unknown keys, wrong types, and syntax errors
/// raise ConfigError; parse errors carry the line number.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text, const std::string& origin);

void validate(const Config& config);

/// Serializes with sorted keys; reloading the output reproduces the config
/// exactly.
std::string to_json_string(const Config& config);

/// Resolves the plant source (file, realizable draw, or protocol sample) and
/// assembles the runtime configuration.
SimConfig build_sim_config(const Config& config);

/// The indices tracked by the weight-snapshot CSV: the configured list, or
/// 10 indices spread evenly through the flat weight vector.
std::vector<int> resolve_snapshot_indices(const Config& config, std::int64_t total_weights);

/// Record of one CLI invocation: resolved inputs, produced files, timing.
struct RunManifest {
    std::string command;
    std::string version;
    std::string config_json;
    std::vector<std::string> outputs;  // paths relative to the output dir
    double wall_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace rac
