#pragma once

#include <string>

#include "rac/linalg.hpp"

namespace rac {

enum class AdaptationLaw { Sliding, EMod };

AdaptationLaw law_from_string(const std::string& name);
std::string to_string(AdaptationLaw law);

/// Control and adaptation gains. The adaptation gain matrix is a positive
/// scalar gamma times identity; gamma = 0 is accepted as a diagnostic switch
/// that freezes the weights.
struct Gains {
    double sigma_e = 2.0;      // state feedback
    double sigma_s = 2.0;      // sliding-mode (switching) gain
    double sigma_theta = 0.0;  // e-modification leakage
    double gamma = 1.0;        // adaptation rate

    void validate() const;
};

/// e = x - x_d.
Vec tracking_error(const Vec& x, const Vec& x_d);

/// Componentwise sign with sgn(0) = 0.
Vec sgn(const Vec& v);

/// u = xd_dot - phi_hat - sigma_e * e - sigma_s * sgn(e). When
/// boundary_layer > 0 the signum is replaced by clamp(e / boundary_layer)
/// to trade exactness for a chattering-free input.
Vec control_input(const Vec& e, const Vec& xd_dot, const Vec& phi_hat, const Gains& gains,
                  double boundary_layer = 0.0);

/// theta_dot = gamma * jacobian^T * e.
Vec adaptation_rate_sliding(const Vec& e, const Mat& jacobian, const Gains& gains);

/// theta_dot = -sigma_theta * ||e|| * theta_hat + gamma * jacobian^T * e.
Vec adaptation_rate_emod(const Vec& e, const Vec& theta_hat, const Mat& jacobian,
                         const Gains& gains);

/// 0.5 e^T e + 0.5 theta_err^T theta_err / gamma. Diagnostic only; requires
/// knowing the ideal weights, so it is meaningful for realizable plants.
double lyapunov_value(const Vec& e, const Vec& theta_err, const Gains& gains);

}  // namespace rac
