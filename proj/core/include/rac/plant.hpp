#pragma once

#include <filesystem>
#include <optional>

#include "rac/resnet.hpp"

namespace rac {

/// Per-component frequencies of the reference x_d,i(t) = 0.5 + sin(w_i t).
struct ReferenceSpec {
    Vec omega;
};

/// Evaluates the reference and its analytic derivative at time t.
void reference(const ReferenceSpec& spec, double t, Vec& x_d, Vec& xd_dot);

/// y(x) = [x, tanh(x), sin(x), sech(x), x*x, x*x*x] stacked, length 6n.
Vec feature_map(const Vec& x);

/// Ground-truth drift field. Either a feature-linear model f(x) = A y(x)
/// with A of shape n x 6n, or a realizable variant whose drift is a network
/// at known ideal weights (a test construction that makes the reconstruction
/// error exactly zero).
class PlantModel {
public:
    PlantModel() = default;

    static PlantModel from_feature_matrix(Mat a);
    static PlantModel realizable(ResNetSpec spec, WeightVector theta_star);

    Vec drift(const Vec& x) const;
    int dim() const;
    bool is_realizable() const { return realizable_.has_value(); }

    const Mat& feature_matrix() const;
    const ResNetSpec& realizable_spec() const;
    const WeightVector& theta_star() const;

private:
    struct Realizable {
        ResNetSpec spec;
        WeightVector theta_star;
    };
    Mat a_;
    std::optional<Realizable> realizable_;
};

struct SampledPlant {
    PlantModel plant;
    Vec x0;
    ReferenceSpec reference;
};

/// Protocol draw: A ~ U(0, 0.1)^{n x 6n}, x0 ~ U(0, 2)^n, omega ~ U(0, 20)^n,
/// in that order from the given generator.
SampledPlant sample_plant(Rng& rng, int n);

/// Pins a sampled instance to disk: n rows of A (row-major), then x0, then
/// omega, one comma-separated line each.
void save_plant_csv(const std::filesystem::path& path, const PlantModel& plant,
                    const Vec& x0, const ReferenceSpec& ref);
SampledPlant load_plant_csv(const std::filesystem::path& path);

}  // namespace rac
