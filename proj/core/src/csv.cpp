#include "rac/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rac/errors.hpp"

namespace rac::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path.string());
    return os;
}

}  // namespace

void write_trajectory(const std::filesystem::path& path, const TrajectoryLog& log) {
    std::ofstream os = open_out(path);
    const int n = log.dim();
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x_" << i;
    for (int i = 1; i <= n; ++i) os << ",xd_" << i;
    os << ",e_norm,u_norm,f_err_norm\n";
    for (std::size_t k = 0; k < log.samples(); ++k) {
        os << format_double(log.t[k]);
        for (int i = 0; i < n; ++i) os << ',' << format_double(log.x[k][i]);
        for (int i = 0; i < n; ++i) os << ',' << format_double(log.x_d[k][i]);
        os << ',' << format_double(log.e[k].norm());
        os << ',' << format_double(log.u[k].norm());
        os << ',' << format_double((log.f[k] - log.phi[k]).norm());
        os << '\n';
    }
}

void write_weight_snapshots(const std::filesystem::path& path, const TrajectoryLog& log,
                            const std::vector<int>& indices) {
    std::ofstream os = open_out(path);
    os << "t";
    for (int idx : indices) os << ",w_" << idx;
    os << '\n';
    for (std::size_t k = 0; k < log.snapshot_t.size(); ++k) {
        os << format_double(log.snapshot_t[k]);
        for (int idx : indices) {
            if (idx < 0 || idx >= log.snapshot_theta[k].size()) {
                throw DimensionError("weight snapshot index " + std::to_string(idx) +
                                     " out of range");
            }
            os << ',' << format_double(log.snapshot_theta[k][idx]);
        }
        os << '\n';
    }
}

void write_batch(const std::filesystem::path& path, const std::vector<BatchResult>& batches) {
    std::ofstream os = open_out(path);
    os << "architecture,seed,J,e_rms,f_rms,u_rms,diverged\n";
    for (const BatchResult& batch : batches) {
        for (const RunRecord& rec : batch.runs) {
            os << batch.architecture << ',' << rec.seed << ','
               << format_double(rec.metrics.cost_j) << ',' << format_double(rec.metrics.e_rms)
               << ',' << format_double(rec.metrics.f_rms) << ','
               << format_double(rec.metrics.u_rms) << ',' << (rec.diverged ? 1 : 0) << '\n';
        }
    }
}

void write_summary(const std::filesystem::path& path, const std::vector<ComparisonRow>& rows) {
    std::ofstream os = open_out(path);
    os << "architecture,e_rms,f_rms,u_rms\n";
    for (const ComparisonRow& row : rows) {
        if (row.failed) {
            os << row.architecture << ",nan,nan,nan\n";
            continue;
        }
        const Metrics& m = row.batch.best().metrics;
        os << row.architecture << ',' << format_double(m.e_rms) << ','
           << format_double(m.f_rms) << ',' << format_double(m.u_rms) << '\n';
    }
}

std::string format_summary_text(const std::vector<ComparisonRow>& rows) {
    char line[160];
    std::string out;
    std::snprintf(line, sizeof(line), "%-18s %12s %12s %12s %12s %8s\n", "architecture",
                  "e_rms", "f_rms", "u_rms", "best_J", "seed");
    out += line;
    for (const ComparisonRow& row : rows) {
        if (row.failed) {
            std::snprintf(line, sizeof(line), "%-18s %12s %12s %12s %12s %8s\n",
                          row.architecture.c_str(), "failed", "-", "-", "-", "-");
            out += line;
            continue;
        }
        const RunRecord& best = row.batch.best();
        std::snprintf(line, sizeof(line), "%-18s %12.4f %12.4f %12.4f %12.4f %8llu\n",
                      row.architecture.c_str(), best.metrics.e_rms, best.metrics.f_rms,
                      best.metrics.u_rms, best.metrics.cost_j,
                      static_cast<unsigned long long>(best.seed));
        out += line;
    }
    return out;
}

void write_gradient_profile(const std::filesystem::path& path, const Vec& resnet_norms,
                            const Vec& fc_norms) {
    if (resnet_norms.size() != fc_norms.size()) {
        throw DimensionError("gradient profile: block counts differ");
    }
    std::ofstream os = open_out(path);
    os << "block_index,frobenius_norm_resnet,frobenius_norm_fc\n";
    for (Eigen::Index p = 0; p < resnet_norms.size(); ++p) {
        os << (p + 1) << ',' << format_double(resnet_norms[p]) << ','
           << format_double(fc_norms[p]) << '\n';
    }
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open: " + path.string());
    Table table;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty csv: " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                  ": not a number: '" + cell + "'");
            }
        }
        if (row.size() != table.header.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": ragged row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace rac::csv
