#pragma once

#include <stdexcept>
#include <string>

namespace levylab {

// Thrown when an adaptive integration fails to converge. Carries the partial
// sum and the error estimate at the point of failure so callers can decide
// whether the partial result is still usable as a diagnostic.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double partial, double error_estimate)
        : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}

    double partial_sum() const { return partial_; }
    double error_estimate() const { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

// Inversion produced a density that violates its contract (negative lobe
// beyond the clip tolerance, or the characteristic tail was not small enough).
class InversionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigensolver contract violations: near-degenerate levels, parity alternation
// failure, or a request for more states than the grid can support.
class SpectrumError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested closed form is not available for the given reference model.
class CapabilityError : public std::logic_error {
    using std::logic_error::logic_error;
};

// Cancellation in a correlator closed form exceeded the acceptable estimate
// and no stable fallback branch applied.
class CancellationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace levylab
