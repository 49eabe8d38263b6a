#pragma once

#include <functional>

namespace levylab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Stops when the accumulated error estimate drops below
/// max(abs_tol, rel_tol * |integral|). Throws QuadratureError (with the
/// partial sum attached) if max_subdivisions is exhausted first.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b,
                           double abs_tol = 1e-12, double rel_tol = 1e-10,
                           int max_subdivisions = 4000);

// Kahan-compensated running sum; the accumulation order is the caller's.
class CompensatedSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// (e^z - 1 - z) / z^2, stable near z = 0.
double phi2(double z);

} // namespace levylab
