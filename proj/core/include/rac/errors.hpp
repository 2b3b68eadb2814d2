#pragma once

#include <stdexcept>
#include <string>

namespace rac {

/// Structural misuse: mismatched dimensions or a corrupted weight layout.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values produced or consumed by a numerical routine.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simulation state left the representable range. Carries the time and state
/// norm at detection so a misconfigured gain or step size can be diagnosed.
class DivergenceError : public NumericError {
public:
    DivergenceError(double time, double state_norm)
        : NumericError("state diverged at t=" + std::to_string(time) +
                       " (state norm " + std::to_string(state_norm) + ")"),
          time_(time),
          state_norm_(state_norm) {}

    double time() const { return time_; }
    double state_norm() const { return state_norm_; }

private:
    double time_;
    double state_norm_;
};

/// Invalid or unreadable configuration input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every run in a batch diverged, so no best run can be selected.
class BatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rac
