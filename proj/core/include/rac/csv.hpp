#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rac/monte_carlo.hpp"
#include "rac/sim.hpp"

namespace rac::csv {

/// Shortest exact decimal form used for all emitted numbers; identical input
/// always serializes to identical bytes.
std::string format_double(double v);

/// Columns: t, x_1..x_n, xd_1..xd_n, e_norm, u_norm, f_err_norm.
void write_trajectory(const std::filesystem::path& path, const TrajectoryLog& log);

/// Columns: t, w_<i> for each tracked flat weight index.
void write_weight_snapshots(const std::filesystem::path& path, const TrajectoryLog& log,
                            const std::vector<int>& indices);

/// Columns: architecture, seed, J, e_rms, f_rms, u_rms, diverged. Rows in
/// batch order, so output bytes depend only on the batch contents.
void write_batch(const std::filesystem::path& path, const std::vector<BatchResult>& batches);

/// Table-style summary of best runs: architecture, e_rms, f_rms, u_rms.
void write_summary(const std::filesystem::path& path, const std::vector<ComparisonRow>& rows);

/// The same summary as aligned text for the console.
std::string format_summary_text(const std::vector<ComparisonRow>& rows);

/// Columns: block_index, frobenius_norm_resnet, frobenius_norm_fc.
void write_gradient_profile(const std::filesystem::path& path, const Vec& resnet_norms,
                            const Vec& fc_norms);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

Table read_table(const std::filesystem::path& path);

}  // namespace rac::csv
