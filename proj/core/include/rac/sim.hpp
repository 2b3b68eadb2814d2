#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rac/control.hpp"
#include "rac/plant.hpp"

namespace rac {

enum class IntegratorKind { Euler, Rk4 };

IntegratorKind integrator_from_string(const std::string& name);
std::string to_string(IntegratorKind kind);

/// Everything one episode needs: protocol constants, architecture, gains,
/// and the resolved plant instance.
struct SimConfig {
    double dt = 1e-3;
    double horizon = 10.0;
    IntegratorKind integrator = IntegratorKind::Euler;
    double boundary_layer = 0.0;  // 0 keeps the discontinuous signum
    int log_decimation = 1;
    double snapshot_period = 0.1;
    double init_low = -0.05;
    double init_high = 0.05;

    ResNetSpec arch;
    Gains gains;
    AdaptationLaw law = AdaptationLaw::Sliding;

    PlantModel plant;
    Vec x0;
    ReferenceSpec reference_spec;

    void validate() const;
};

/// Time series logged at the integrator's evaluation points (every
/// log_decimation-th step). All per-stamp series share length; lyapunov is
/// populated only when the plant is realizable, since it needs the ideal
/// weights.
struct TrajectoryLog {
    std::vector<double> t;
    std::vector<Vec> x;
    std::vector<Vec> x_d;
    std::vector<Vec> e;
    std::vector<Vec> u;
    std::vector<Vec> f;
    std::vector<Vec> phi;
    std::vector<double> lyapunov;

    std::vector<double> snapshot_t;
    std::vector<Vec> snapshot_theta;
    Vec theta_final;

    std::size_t samples() const { return t.size(); }
    int dim() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
};

/// One right-hand-side evaluation of the coupled state/weight dynamics.
/// Control input and adaptation rate are computed from the same forward pass
/// and the same weight Jacobian; the diagnostics are the values at the
/// evaluation point.
struct RhsEval {
    Vec x_dot;
    Vec theta_dot;
    Vec x_d, xd_dot, e, u, f, phi;
};

RhsEval eval_rhs(const SimConfig& config, double t, const Vec& x, const WeightVector& theta);

/// Advances (x, theta) by one fixed step in place. Throws DivergenceError if
/// the incoming state is non-finite.
void step(const SimConfig& config, double t, Vec& x, WeightVector& theta);

/// Integrates horizon/dt steps from config.x0 with weights initialized from
/// weight_seed. Deterministic given (config, seed).
TrajectoryLog run_episode(const SimConfig& config, std::uint64_t weight_seed);

struct Metrics {
    double e_rms = 0.0;
    double f_rms = 0.0;
    double u_rms = 0.0;
    double cost_j = 0.0;
    double ultimate_bound = 0.0;
};

/// RMS of the logged vector norms, trapezoidal cost integral of
/// e^T Q e + u^T R u, and the max error norm over the final 20% of the
/// logged window.
Metrics metrics(const TrajectoryLog& log, const Mat& q, const Mat& r);

}  // namespace rac
