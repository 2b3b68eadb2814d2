#include "rac/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "rac/errors.hpp"

namespace rac {

const RunRecord& BatchResult::best() const {
    if (best_index < 0 || best_index >= static_cast<int>(runs.size())) {
        throw BatchError("batch has no best run");
    }
    return runs[static_cast<std::size_t>(best_index)];
}

int resolve_workers(int requested) {
    int workers = requested > 0 ? requested
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (const char* env = std::getenv("RESNET_AC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < workers) workers = cap;
    }
    return workers;
}

BatchResult run_batch(const SimConfig& config, int num_runs, std::uint64_t base_seed,
                      const Mat& q, const Mat& r, int workers,
                      std::string architecture_label,
                      std::optional<std::uint64_t> per_run_plant_seed) {
    if (num_runs < 1) throw ConfigError("run_batch: num_runs must be at least 1");
    if (per_run_plant_seed && config.plant.is_realizable()) {
        throw ConfigError("run_batch: per-run plants are not supported for realizable drift");
    }
    config.validate();

    BatchResult result;
    result.architecture = std::move(architecture_label);
    result.runs.assign(static_cast<std::size_t>(num_runs), RunRecord{});

    const int thread_count = std::min(resolve_workers(workers), num_runs);
    std::atomic<int> next{0};

    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < num_runs; i = next.fetch_add(1)) {
            RunRecord& rec = result.runs[static_cast<std::size_t>(i)];
            rec.seed = base_seed + static_cast<std::uint64_t>(i);
            try {
                SimConfig run_config = config;
                if (per_run_plant_seed) {
                    Rng plant_rng(*per_run_plant_seed + static_cast<std::uint64_t>(i));
                    SampledPlant sp = sample_plant(plant_rng, config.arch.io_dim);
                    run_config.plant = std::move(sp.plant);
                    run_config.x0 = std::move(sp.x0);
                    run_config.reference_spec = std::move(sp.reference);
                }
                const TrajectoryLog log = run_episode(run_config, rec.seed);
                rec.metrics = metrics(log, q, r);
            } catch (const NumericError&) {
                rec.diverged = true;
                rec.metrics = Metrics{std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN()};
            }
        }
    };

    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Argmin cost over non-diverged runs; ties keep the lowest seed.
    for (int i = 0; i < num_runs; ++i) {
        const RunRecord& rec = result.runs[static_cast<std::size_t>(i)];
        if (rec.diverged) continue;
        if (result.best_index < 0 ||
            rec.metrics.cost_j < result.runs[static_cast<std::size_t>(result.best_index)]
                                     .metrics.cost_j) {
            result.best_index = i;
        }
    }
    if (result.best_index < 0) {
        throw BatchError("run_batch: every run in batch '" + result.architecture +
                         "' diverged");
    }
    return result;
}

std::vector<ComparisonRow> compare_architectures(const SimConfig& base, int num_runs,
                                                 std::uint64_t base_seed, const Mat& q,
                                                 const Mat& r, int workers) {
    base.validate();
    const int n = base.arch.io_dim;

    struct Variant {
        std::string label;
        ResNetSpec arch;
    };
    ResNetSpec no_shortcut = base.arch;
    no_shortcut.shortcut_enabled = false;
    const std::vector<Variant> variants = {
        {"resnet", base.arch},
        {"fully_connected", no_shortcut},
        {"shallow_10", shallow_spec(n, 10)},
        {"shallow_100", shallow_spec(n, 100)},
    };

    std::vector<ComparisonRow> rows;
    rows.reserve(variants.size());
    for (const Variant& v : variants) {
        ComparisonRow row;
        row.architecture = v.label;
        SimConfig config = base;
        config.arch = v.arch;
        try {
            row.batch = run_batch(config, num_runs, base_seed, q, r, workers, v.label);
        } catch (const BatchError& err) {
            row.failed = true;
            row.failure = err.what();
            row.batch.architecture = v.label;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Vec shallow_forward(const Mat& v0, const Mat& v1, const Vec& x) {
    if (v0.rows() != x.size() || v1.rows() != v0.cols()) {
        throw DimensionError("shallow_forward: weight shapes do not conform");
    }
    return v1.transpose() * (v0.transpose() * x).array().tanh().matrix();
}

ResNetSpec shallow_spec(int io_dim, int hidden_neurons) {
    return ResNetSpec::uniform(io_dim, 1, 1, hidden_neurons, Activation::Tanh, false);
}

}  // namespace rac
