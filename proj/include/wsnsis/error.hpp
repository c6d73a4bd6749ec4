#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wsnsis {

/// Bad input: malformed graph, parameter out of range, unknown config key.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sleep scheduling with u = v = 0 (or v = 0 where a stationary split is needed).
class DegenerateSchedulingError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// An iterative solver ran out of iterations. Carries the last iterate so the
/// caller can inspect it or restart with a larger cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate, double residual)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> last_iterate_;
    double residual_;
};

} // namespace wsnsis
