#include "rac/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rac/errors.hpp"

namespace rac {

namespace {

using nlohmann::json;

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

template <typename T>
T get_as(const json& j, const std::string& key, const std::string& origin) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(origin + ": key '" + key + "' has the wrong type");
    }
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(origin + ":" + std::to_string(line_of_byte(text, err.byte)) +
                          ": " + err.what());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");

    Config c;
    for (const auto& [key, value] : doc.items()) {
        if (key == "n") c.n = get_as<int>(value, key, origin);
        else if (key == "num_blocks") c.num_blocks = get_as<int>(value, key, origin);
        else if (key == "hidden_layers_per_block")
            c.hidden_layers_per_block = get_as<int>(value, key, origin);
        else if (key == "width") c.width = get_as<int>(value, key, origin);
        else if (key == "activation") c.activation = get_as<std::string>(value, key, origin);
        else if (key == "shortcut") c.shortcut = get_as<bool>(value, key, origin);
        else if (key == "init_low") c.init_low = get_as<double>(value, key, origin);
        else if (key == "init_high") c.init_high = get_as<double>(value, key, origin);
        else if (key == "sigma_e") c.sigma_e = get_as<double>(value, key, origin);
        else if (key == "sigma_s") c.sigma_s = get_as<double>(value, key, origin);
        else if (key == "sigma_theta") c.sigma_theta = get_as<double>(value, key, origin);
        else if (key == "gamma") c.gamma = get_as<double>(value, key, origin);
        else if (key == "law") c.law = get_as<std::string>(value, key, origin);
        else if (key == "plant_seed") c.plant_seed = get_as<std::uint64_t>(value, key, origin);
        else if (key == "realizable") c.realizable = get_as<bool>(value, key, origin);
        else if (key == "theta_star_low") c.theta_star_low = get_as<double>(value, key, origin);
        else if (key == "theta_star_high")
            c.theta_star_high = get_as<double>(value, key, origin);
        else if (key == "plant_file") c.plant_file = get_as<std::string>(value, key, origin);
        else if (key == "per_run_plants") c.per_run_plants = get_as<bool>(value, key, origin);
        else if (key == "dt") c.dt = get_as<double>(value, key, origin);
        else if (key == "horizon_s") c.horizon_s = get_as<double>(value, key, origin);
        else if (key == "integrator") c.integrator = get_as<std::string>(value, key, origin);
        else if (key == "boundary_layer")
            c.boundary_layer = get_as<double>(value, key, origin);
        else if (key == "log_decimation")
            c.log_decimation = get_as<int>(value, key, origin);
        else if (key == "snapshot_period_s")
            c.snapshot_period_s = get_as<double>(value, key, origin);
        else if (key == "snapshot_indices")
            c.snapshot_indices = get_as<std::vector<int>>(value, key, origin);
        else if (key == "runs") c.runs = get_as<int>(value, key, origin);
        else if (key == "weight_seed_base")
            c.weight_seed_base = get_as<std::uint64_t>(value, key, origin);
        else
            throw ConfigError(origin + ": unknown key '" + key + "'");
    }
    validate(c);
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str(), path.string());
}

void validate(const Config& config) {
    if (config.n < 1) throw ConfigError("config: n must be at least 1");
    if (config.num_blocks < 1) throw ConfigError("config: num_blocks must be at least 1");
    if (config.hidden_layers_per_block < 1) {
        throw ConfigError("config: hidden_layers_per_block must be at least 1");
    }
    if (config.width < 1) throw ConfigError("config: width must be at least 1");
    activation_from_string(config.activation);
    law_from_string(config.law);
    integrator_from_string(config.integrator);
    if (!(config.init_low < config.init_high)) {
        throw ConfigError("config: init_low must be below init_high");
    }
    if (config.realizable && !(config.theta_star_low < config.theta_star_high)) {
        throw ConfigError("config: theta_star_low must be below theta_star_high");
    }
    if (!(config.dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (config.horizon_s < config.dt) {
        throw ConfigError("config: horizon_s must be at least dt");
    }
    if (config.log_decimation < 1) {
        throw ConfigError("config: log_decimation must be at least 1");
    }
    if (config.runs < 1) throw ConfigError("config: runs must be at least 1");
    if (config.realizable && !config.plant_file.empty()) {
        throw ConfigError("config: realizable and plant_file are mutually exclusive");
    }
    if (config.realizable && config.per_run_plants) {
        throw ConfigError("config: per_run_plants does not apply to realizable drift");
    }
    Gains gains{config.sigma_e, config.sigma_s, config.sigma_theta, config.gamma};
    gains.validate();
}

std::string to_json_string(const Config& c) {
    json doc;
    doc["n"] = c.n;
    doc["num_blocks"] = c.num_blocks;
    doc["hidden_layers_per_block"] = c.hidden_layers_per_block;
    doc["width"] = c.width;
    doc["activation"] = c.activation;
    doc["shortcut"] = c.shortcut;
    doc["init_low"] = c.init_low;
    doc["init_high"] = c.init_high;
    doc["sigma_e"] = c.sigma_e;
    doc["sigma_s"] = c.sigma_s;
    doc["sigma_theta"] = c.sigma_theta;
    doc["gamma"] = c.gamma;
    doc["law"] = c.law;
    doc["plant_seed"] = c.plant_seed;
    doc["realizable"] = c.realizable;
    doc["theta_star_low"] = c.theta_star_low;
    doc["theta_star_high"] = c.theta_star_high;
    doc["plant_file"] = c.plant_file;
    doc["per_run_plants"] = c.per_run_plants;
    doc["dt"] = c.dt;
    doc["horizon_s"] = c.horizon_s;
    doc["integrator"] = c.integrator;
    doc["boundary_layer"] = c.boundary_layer;
    doc["log_decimation"] = c.log_decimation;
    doc["snapshot_period_s"] = c.snapshot_period_s;
    doc["snapshot_indices"] = c.snapshot_indices;
    doc["runs"] = c.runs;
    doc["weight_seed_base"] = c.weight_seed_base;
    return doc.dump(2) + "\n";
}

SimConfig build_sim_config(const Config& config) {
    validate(config);

    SimConfig sim;
    sim.dt = config.dt;
    sim.horizon = config.horizon_s;
    sim.integrator = integrator_from_string(config.integrator);
    sim.boundary_layer = config.boundary_layer;
    sim.log_decimation = config.log_decimation;
    sim.snapshot_period = config.snapshot_period_s;
    sim.init_low = config.init_low;
    sim.init_high = config.init_high;
    sim.arch = ResNetSpec::uniform(config.n, config.num_blocks, config.hidden_layers_per_block,
                                   config.width, activation_from_string(config.activation),
                                   config.shortcut);
    sim.gains = Gains{config.sigma_e, config.sigma_s, config.sigma_theta, config.gamma};
    sim.law = law_from_string(config.law);

    if (!config.plant_file.empty()) {
        SampledPlant sp = load_plant_csv(config.plant_file);
        sim.plant = std::move(sp.plant);
        sim.x0 = std::move(sp.x0);
        sim.reference_spec = std::move(sp.reference);
    } else if (config.realizable) {
        // Ideal weights, then x0 and omega, all from the plant seed stream.
        Rng rng(config.plant_seed);
        auto layout = std::make_shared<const WeightLayout>(sim.arch);
        WeightVector theta_star =
            init_weights(layout, rng, config.theta_star_low, config.theta_star_high);
        sim.plant = PlantModel::realizable(sim.arch, std::move(theta_star));
        sim.x0.resize(config.n);
        for (int i = 0; i < config.n; ++i) sim.x0[i] = rng.uniform(0.0, 2.0);
        Vec omega(config.n);
        for (int i = 0; i < config.n; ++i) omega[i] = rng.uniform(0.0, 20.0);
        sim.reference_spec = ReferenceSpec{std::move(omega)};
    } else {
        Rng rng(config.plant_seed);
        SampledPlant sp = sample_plant(rng, config.n);
        sim.plant = std::move(sp.plant);
        sim.x0 = std::move(sp.x0);
        sim.reference_spec = std::move(sp.reference);
    }
    sim.validate();
    return sim;
}

std::vector<int> resolve_snapshot_indices(const Config& config, std::int64_t total_weights) {
    if (!config.snapshot_indices.empty()) {
        for (int idx : config.snapshot_indices) {
            if (idx < 0 || idx >= total_weights) {
                throw ConfigError("config: snapshot index " + std::to_string(idx) +
                                  " out of range for " + std::to_string(total_weights) +
                                  " weights");
            }
        }
        return config.snapshot_indices;
    }
    const int count = static_cast<int>(std::min<std::int64_t>(10, total_weights));
    std::vector<int> indices;
    indices.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        indices.push_back(static_cast<int>(i * total_weights / count));
    }
    return indices;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    json doc;
    doc["command"] = manifest.command;
    doc["artifact_version"] = manifest.version;
    doc["config"] = json::parse(manifest.config_json);
    doc["outputs"] = manifest.outputs;
    doc["wall_seconds"] = manifest.wall_seconds;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path.string());
    os << doc.dump(2) << "\n";
}

}  // namespace rac
