#include "rac/plant.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rac/errors.hpp"

namespace rac {

void reference(const ReferenceSpec& spec, double t, Vec& x_d, Vec& xd_dot) {
    const Eigen::Index n = spec.omega.size();
    x_d.resize(n);
    xd_dot.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = spec.omega[i];
        x_d[i] = 0.5 + std::sin(w * t);
        xd_dot[i] = w * std::cos(w * t);
    }
}

Vec feature_map(const Vec& x) {
    const Eigen::Index n = x.size();
    Vec y(6 * n);
    y.segment(0, n) = x;
    y.segment(n, n) = x.array().tanh();
    y.segment(2 * n, n) = x.array().sin();
    // sech as 1/cosh; cosh overflows to inf for huge inputs and the feature
    // degrades gracefully to 0.
    y.segment(3 * n, n) = x.array().cosh().inverse();
    y.segment(4 * n, n) = x.array().square();
    y.segment(5 * n, n) = x.array().cube();
    return y;
}

PlantModel PlantModel::from_feature_matrix(Mat a) {
    if (a.rows() <= 0 || a.cols() != 6 * a.rows()) {
        throw DimensionError("plant: feature matrix must be n x 6n");
    }
    PlantModel p;
    p.a_ = std::move(a);
    return p;
}

PlantModel PlantModel::realizable(ResNetSpec spec, WeightVector theta_star) {
    spec.validate();
    if (theta_star.flat().size() != spec.total_weight_count()) {
        throw DimensionError("plant: theta_star length does not match spec");
    }
    PlantModel p;
    p.realizable_ = Realizable{std::move(spec), std::move(theta_star)};
    return p;
}

Vec PlantModel::drift(const Vec& x) const {
    if (realizable_) {
        return resnet_forward(realizable_->spec, realizable_->theta_star, x);
    }
    if (a_.rows() == 0) throw DimensionError("plant: not initialized");
    return a_ * feature_map(x);
}

int PlantModel::dim() const {
    if (realizable_) return realizable_->spec.io_dim;
    return static_cast<int>(a_.rows());
}

const Mat& PlantModel::feature_matrix() const {
    if (realizable_ || a_.rows() == 0) {
        throw DimensionError("plant: no feature matrix in this variant");
    }
    return a_;
}

const ResNetSpec& PlantModel::realizable_spec() const {
    if (!realizable_) throw DimensionError("plant: not a realizable variant");
    return realizable_->spec;
}

const WeightVector& PlantModel::theta_star() const {
    if (!realizable_) throw DimensionError("plant: not a realizable variant");
    return realizable_->theta_star;
}

SampledPlant sample_plant(Rng& rng, int n) {
    if (n < 1) throw DimensionError("sample_plant: n must be at least 1");
    Mat a(n, 6 * n);
    // Row-major fill so the draw order matches the CSV serialization.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 6 * n; ++j) a(i, j) = rng.uniform(0.0, 0.1);
    }
    Vec x0(n);
    for (int i = 0; i < n; ++i) x0[i] = rng.uniform(0.0, 2.0);
    Vec omega(n);
    for (int i = 0; i < n; ++i) omega[i] = rng.uniform(0.0, 20.0);

    SampledPlant out;
    out.plant = PlantModel::from_feature_matrix(std::move(a));
    out.x0 = std::move(x0);
    out.reference = ReferenceSpec{std::move(omega)};
    return out;
}

namespace {

void write_row(std::ofstream& os, const Vec& v) {
    char buf[40];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        os << buf;
        if (i + 1 < v.size()) os << ',';
    }
    os << '\n';
}

Vec parse_row(const std::string& line, const std::filesystem::path& path) {
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("plant file " + path.string() + ": bad number '" + cell + "'");
        }
    }
    return Eigen::Map<Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

void save_plant_csv(const std::filesystem::path& path, const PlantModel& plant,
                    const Vec& x0, const ReferenceSpec& ref) {
    const Mat& a = plant.feature_matrix();
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open plant file for writing: " + path.string());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        write_row(os, a.row(i).transpose());
    }
    write_row(os, x0);
    write_row(os, ref.omega);
}

SampledPlant load_plant_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open plant file: " + path.string());
    std::vector<Vec> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_row(line, path));
    }
    // Layout is n rows of A followed by x0 and omega, so n + 2 lines total
    // with the first line 6n long.
    if (rows.size() < 3 || rows.front().size() % 6 != 0) {
        throw ConfigError("plant file " + path.string() + ": malformed layout");
    }
    const int n = static_cast<int>(rows.front().size()) / 6;
    if (static_cast<int>(rows.size()) != n + 2) {
        throw ConfigError("plant file " + path.string() + ": expected " + std::to_string(n + 2) +
                          " lines for n=" + std::to_string(n));
    }
    Mat a(n, 6 * n);
    for (int i = 0; i < n; ++i) {
        if (rows[static_cast<std::size_t>(i)].size() != 6 * n) {
            throw ConfigError("plant file " + path.string() + ": ragged A row");
        }
        a.row(i) = rows[static_cast<std::size_t>(i)].transpose();
    }
    if (rows[static_cast<std::size_t>(n)].size() != n ||
        rows[static_cast<std::size_t>(n) + 1].size() != n) {
        throw ConfigError("plant file " + path.string() + ": x0/omega length mismatch");
    }
    SampledPlant out;
    out.plant = PlantModel::from_feature_matrix(std::move(a));
    out.x0 = rows[static_cast<std::size_t>(n)];
    out.reference = ReferenceSpec{rows[static_cast<std::size_t>(n) + 1]};
    return out;
}

}  // namespace rac
