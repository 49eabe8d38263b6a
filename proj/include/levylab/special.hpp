#pragma once

namespace levylab {

/// Gamma function on the positive real axis (Lanczos approximation, g = 7).
/// Relative accuracy is ~1e-14 on [0.25, 10], which is the range the moment
/// formulas use. Arguments in (0, 0.5) go through the reflection formula.
double gamma_fn(double x);

/// Modified Bessel function K1(x) for x > 0.
/// Small arguments (x < 2) use the ascending series; large arguments use the
/// Temme continued fraction for the irregular confluent solution, which is
/// the convergent resummation of the divergent large-x asymptotic series.
double bessel_k1(double x);

} // namespace levylab
