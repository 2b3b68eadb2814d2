#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rac/sim.hpp"

namespace rac {

struct RunRecord {
    std::uint64_t seed = 0;
    Metrics metrics;
    bool diverged = false;
};

/// Outcome of one batch: every requested run, plus the index of the
/// non-diverged run with the least cost.
struct BatchResult {
    std::string architecture;
    std::vector<RunRecord> runs;
    int best_index = -1;

    const RunRecord& best() const;
};

/// Resolves a worker count: `requested` if positive, otherwise the hardware
/// thread count, capped by the RESNET_AC_THREADS environment variable when
/// it is set.
int resolve_workers(int requested);

/// Runs run_episode for seeds base_seed .. base_seed + num_runs - 1 on the
/// fixed plant in `config` and records per-run metrics. Runs are independent
/// and keyed by seed, so results are identical for any worker count. With
/// per_run_plant_seed set, run i instead samples its own plant instance from
/// that seed + i. Throws BatchError if every run diverged.
BatchResult run_batch(const SimConfig& config, int num_runs, std::uint64_t base_seed,
                      const Mat& q, const Mat& r, int workers = 0,
                      std::string architecture_label = "resnet",
                      std::optional<std::uint64_t> per_run_plant_seed = std::nullopt);

struct ComparisonRow {
    std::string architecture;
    bool failed = false;
    std::string failure;
    BatchResult batch;
};

/// The four-way benchmark on one plant: the configured network with
/// shortcuts, the same network without them, and shallow single-hidden-layer
/// baselines with 10 and 100 neurons. All rows consume the same plant and
/// the same weight-seed sequence; a row whose batch fails entirely is
/// reported failed without aborting the others.
std::vector<ComparisonRow> compare_architectures(const SimConfig& base, int num_runs,
                                                 std::uint64_t base_seed, const Mat& q,
                                                 const Mat& r, int workers = 0);

/// Single-hidden-layer network v1^T tanh(v0^T x); coincides with a one-block
/// spec without shortcuts holding the same weights.
Vec shallow_forward(const Mat& v0, const Mat& v1, const Vec& x);

/// One-block, one-hidden-layer spec with shortcuts off.
ResNetSpec shallow_spec(int io_dim, int hidden_neurons);

}  // namespace rac
