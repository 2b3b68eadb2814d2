#include "rac/sim.hpp"

#include <cmath>

#include "rac/errors.hpp"
#include "rac/jacobian.hpp"

namespace rac {

IntegratorKind integrator_from_string(const std::string& name) {
    if (name == "euler") return IntegratorKind::Euler;
    if (name == "rk4") return IntegratorKind::Rk4;
    throw ConfigError("unknown integrator '" + name + "' (expected euler or rk4)");
}

std::string to_string(IntegratorKind kind) {
    switch (kind) {
        case IntegratorKind::Euler: return "euler";
        case IntegratorKind::Rk4: return "rk4";
    }
    return "?";
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("sim: dt must be positive");
    if (horizon < dt) throw ConfigError("sim: horizon must be at least dt");
    if (log_decimation < 1) throw ConfigError("sim: log_decimation must be at least 1");
    if (boundary_layer < 0.0) throw ConfigError("sim: boundary_layer must be nonnegative");
    if (!(init_low < init_high)) throw ConfigError("sim: init_low must be below init_high");
    arch.validate();
    gains.validate();
    if (plant.dim() != arch.io_dim) {
        throw ConfigError("sim: plant dimension does not match architecture io_dim");
    }
    if (x0.size() != arch.io_dim) throw ConfigError("sim: x0 length does not match io_dim");
    if (reference_spec.omega.size() != arch.io_dim) {
        throw ConfigError("sim: reference omega length does not match io_dim");
    }
    if (plant.is_realizable()) {
        // The Lyapunov diagnostic subtracts weight vectors elementwise.
        if (plant.theta_star().flat().size() != arch.total_weight_count()) {
            throw ConfigError("sim: realizable plant weights do not match controller arch");
        }
    }
}

RhsEval eval_rhs(const SimConfig& config, double t, const Vec& x, const WeightVector& theta) {
    RhsEval out;
    reference(config.reference_spec, t, out.x_d, out.xd_dot);
    out.e = tracking_error(x, out.x_d);

    ForwardCache cache;
    out.phi = resnet_forward(config.arch, theta, x, &cache);
    const Mat jac = resnet_jacobian(config.arch, theta, cache);

    out.u = control_input(out.e, out.xd_dot, out.phi, config.gains, config.boundary_layer);
    out.f = config.plant.drift(x);
    out.x_dot = out.f + out.u;
    out.theta_dot = config.law == AdaptationLaw::Sliding
                        ? adaptation_rate_sliding(out.e, jac, config.gains)
                        : adaptation_rate_emod(out.e, theta.flat(), jac, config.gains);
    return out;
}

namespace {

void check_finite_state(double t, const Vec& x, const WeightVector& theta) {
    if (!x.allFinite() || !theta.flat().allFinite()) {
        throw DivergenceError(t, x.norm());
    }
}

void advance(const SimConfig& config, double t, Vec& x, WeightVector& theta,
             const RhsEval& first_eval) {
    const double dt = config.dt;
    if (config.integrator == IntegratorKind::Euler) {
        x += dt * first_eval.x_dot;
        theta.flat() += dt * first_eval.theta_dot;
        return;
    }
    // Classical four-stage Runge-Kutta on the coupled (x, theta) system.
    const Vec& k1x = first_eval.x_dot;
    const Vec& k1t = first_eval.theta_dot;

    WeightVector probe(theta.layout_ptr(), theta.flat() + 0.5 * dt * k1t);
    RhsEval e2 = eval_rhs(config, t + 0.5 * dt, x + 0.5 * dt * k1x, probe);

    probe.flat() = theta.flat() + 0.5 * dt * e2.theta_dot;
    RhsEval e3 = eval_rhs(config, t + 0.5 * dt, x + 0.5 * dt * e2.x_dot, probe);

    probe.flat() = theta.flat() + dt * e3.theta_dot;
    RhsEval e4 = eval_rhs(config, t + dt, x + dt * e3.x_dot, probe);

    x += (dt / 6.0) * (k1x + 2.0 * e2.x_dot + 2.0 * e3.x_dot + e4.x_dot);
    theta.flat() += (dt / 6.0) * (k1t + 2.0 * e2.theta_dot + 2.0 * e3.theta_dot + e4.theta_dot);
}

}  // namespace

void step(const SimConfig& config, double t, Vec& x, WeightVector& theta) {
    check_finite_state(t, x, theta);
    const RhsEval eval = eval_rhs(config, t, x, theta);
    advance(config, t, x, theta, eval);
}

TrajectoryLog run_episode(const SimConfig& config, std::uint64_t weight_seed) {
    config.validate();

    auto layout = std::make_shared<const WeightLayout>(config.arch);
    Rng rng(weight_seed);
    WeightVector theta = init_weights(layout, rng, config.init_low, config.init_high);
    Vec x = config.x0;

    const long long steps = std::llround(config.horizon / config.dt);
    const long long snapshot_steps =
        std::max(1LL, std::llround(config.snapshot_period / config.dt));
    const bool track_lyapunov = config.plant.is_realizable();

    TrajectoryLog log;
    const std::size_t expected =
        static_cast<std::size_t>(steps / config.log_decimation) + 1;
    log.t.reserve(expected);
    log.x.reserve(expected);

    for (long long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        check_finite_state(t, x, theta);
        const RhsEval eval = eval_rhs(config, t, x, theta);

        if (k % config.log_decimation == 0) {
            log.t.push_back(t);
            log.x.push_back(x);
            log.x_d.push_back(eval.x_d);
            log.e.push_back(eval.e);
            log.u.push_back(eval.u);
            log.f.push_back(eval.f);
            log.phi.push_back(eval.phi);
            if (track_lyapunov) {
                const Vec theta_err = config.plant.theta_star().flat() - theta.flat();
                log.lyapunov.push_back(lyapunov_value(eval.e, theta_err, config.gains));
            }
        }
        if (k % snapshot_steps == 0) {
            log.snapshot_t.push_back(t);
            log.snapshot_theta.push_back(theta.flat());
        }

        advance(config, t, x, theta, eval);
    }
    check_finite_state(config.horizon, x, theta);
    log.theta_final = theta.flat();
    return log;
}

Metrics metrics(const TrajectoryLog& log, const Mat& q, const Mat& r) {
    if (log.samples() == 0) throw DimensionError("metrics: empty log");
    const int n = log.dim();
    if (q.rows() != n || q.cols() != n || r.rows() != n || r.cols() != n) {
        throw DimensionError("metrics: Q/R must be n x n");
    }

    const std::size_t count = log.samples();
    double e_sq = 0.0, f_sq = 0.0, u_sq = 0.0;
    std::vector<double> integrand(count);
    for (std::size_t i = 0; i < count; ++i) {
        e_sq += log.e[i].squaredNorm();
        u_sq += log.u[i].squaredNorm();
        f_sq += (log.f[i] - log.phi[i]).squaredNorm();
        integrand[i] = log.e[i].dot(q * log.e[i]) + log.u[i].dot(r * log.u[i]);
    }

    Metrics m;
    m.e_rms = std::sqrt(e_sq / static_cast<double>(count));
    m.f_rms = std::sqrt(f_sq / static_cast<double>(count));
    m.u_rms = std::sqrt(u_sq / static_cast<double>(count));

    for (std::size_t i = 0; i + 1 < count; ++i) {
        m.cost_j += 0.5 * (integrand[i] + integrand[i + 1]) * (log.t[i + 1] - log.t[i]);
    }

    const double window_start = 0.8 * log.t.back();
    m.ultimate_bound = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (log.t[i] >= window_start) {
            m.ultimate_bound = std::max(m.ultimate_bound, log.e[i].norm());
        }
    }
    return m;
}

}  // namespace rac
