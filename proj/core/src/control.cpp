#include "rac/control.hpp"

#include <algorithm>
#include <cmath>

#include "rac/errors.hpp"

namespace rac {

AdaptationLaw law_from_string(const std::string& name) {
    if (name == "sliding") return AdaptationLaw::Sliding;
    if (name == "emod") return AdaptationLaw::EMod;
    throw ConfigError("unknown adaptation law '" + name + "' (expected sliding or emod)");
}

std::string to_string(AdaptationLaw law) {
    switch (law) {
        case AdaptationLaw::Sliding: return "sliding";
        case AdaptationLaw::EMod: return "emod";
    }
    return "?";
}

void Gains::validate() const {
    if (!(sigma_e > 0.0)) throw ConfigError("gains: sigma_e must be positive");
    if (sigma_s < 0.0) throw ConfigError("gains: sigma_s must be nonnegative");
    if (sigma_theta < 0.0) throw ConfigError("gains: sigma_theta must be nonnegative");
    if (gamma < 0.0) throw ConfigError("gains: gamma must be nonnegative");
}

Vec tracking_error(const Vec& x, const Vec& x_d) {
    if (x.size() != x_d.size()) {
        throw DimensionError("tracking_error: state and reference lengths differ");
    }
    return x - x_d;
}

Vec sgn(const Vec& v) {
    return v.unaryExpr([](double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); });
}

Vec control_input(const Vec& e, const Vec& xd_dot, const Vec& phi_hat, const Gains& gains,
                  double boundary_layer) {
    if (e.size() != xd_dot.size() || e.size() != phi_hat.size()) {
        throw DimensionError("control_input: argument lengths differ");
    }
    if (!e.allFinite() || !xd_dot.allFinite() || !phi_hat.allFinite()) {
        throw NumericError("control_input: non-finite input");
    }
    Vec switching;
    if (boundary_layer > 0.0) {
        switching = (e / boundary_layer).cwiseMax(-1.0).cwiseMin(1.0);
    } else {
        switching = sgn(e);
    }
    return xd_dot - phi_hat - gains.sigma_e * e - gains.sigma_s * switching;
}

Vec adaptation_rate_sliding(const Vec& e, const Mat& jacobian, const Gains& gains) {
    if (jacobian.rows() != e.size()) {
        throw DimensionError("adaptation_rate: jacobian rows do not match error length");
    }
    return gains.gamma * (jacobian.transpose() * e);
}

Vec adaptation_rate_emod(const Vec& e, const Vec& theta_hat, const Mat& jacobian,
                         const Gains& gains) {
    if (jacobian.rows() != e.size() || jacobian.cols() != theta_hat.size()) {
        throw DimensionError("adaptation_rate: jacobian shape does not match arguments");
    }
    return -gains.sigma_theta * e.norm() * theta_hat + gains.gamma * (jacobian.transpose() * e);
}

double lyapunov_value(const Vec& e, const Vec& theta_err, const Gains& gains) {
    if (theta_err.size() == 0) return 0.5 * e.squaredNorm();
    if (!(gains.gamma > 0.0)) {
        throw ConfigError("lyapunov_value: gamma must be positive to invert the gain");
    }
    return 0.5 * e.squaredNorm() + 0.5 * theta_err.squaredNorm() / gains.gamma;
}

}  // namespace rac
