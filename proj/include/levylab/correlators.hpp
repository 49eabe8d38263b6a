#pragma once

#include <optional>
#include <vector>

#include "levylab/schrodinger.hpp"

namespace levylab {

// All sums below run over the truncated eigenbasis carried by MatrixElements,
// in a fixed deterministic order with compensated accumulation, so repeated
// evaluation is bit-identical.

/// <X(t) X(u)> at |t - u| = lag: sum_{n>=1} q_{0n}^2 exp(-E_n lag).
double two_point(const MatrixElements& me, double lag);

/// Sharp-time fourth moment <X^4>: sum over all k,l,m >= 0 of
/// q_{0k} q_{kl} q_{lm} q_{m0}.
double sharp_moment4(const MatrixElements& me);

/// Small-window limit of the rescaled connected fourth moment:
/// sum_{k,l,m>=1} q_{0k} q_{kl} q_{lm} q_{m0} - 2 (sum_{k>=1} q_{0k}^2)^2.
/// Equals the fourth cumulant of the sharp-time distribution.
double chi2_small(const MatrixElements& me);

/// Large-window limit:
/// 24 sum_{k,l,m>=1} q_{0k} q_{kl} q_{lm} q_{m0} / (E_k E_l E_m)
/// - 24 sum_{k,m>=1} q_{0k}^2 q_{0m}^2 / (E_k E_m^2).
double chi2_large(const MatrixElements& me);

/// I(a,b,c;T): the ordered four-fold window integral
///   Int_{-T<=w<=v<=u<=t<=T} exp(-a(t-u) - b(u-v) - c(v-w))
/// in closed form. Equals the five-fold convolution of exponentials with
/// rates {a, b, c, 0, 0} evaluated at 2T, hence symmetric in (a, b, c).
/// a, c > 0; b >= 0 (b = 0 is the ground-state intermediate channel).
double ordered_window_integral(double a, double b, double c, double T);

/// J(E;T) = 2 [ 2T/E - (1 - e^{-2ET})/E^2 ], the two-sided pair integral.
double two_point_window_integral(double E, double T);

/// Finite-window diagnostic
///   chi2(T) = (1+2T)^3/(2T)^4 [ 24 sum q_{0k} q_{kl} q_{lm} q_{m0} I(E_k,E_l,E_m;T)
///                               - 3 (sum q_{0k}^2 J(E_k;T))^2 ]
/// with k,m >= 1 and l >= 0. An optional energy scale E replaces the window
/// prefactor by (1+2ET)^3/(2ET)^4 for dimension-matched comparisons.
double chi2_exact(const MatrixElements& me, double T,
                  std::optional<double> energy_scale = std::nullopt);

/// Max |two_point(t+tau, u+tau) - two_point(t, u)| over a probe set of
/// (t, u) pairs; zero up to rounding because only lags enter.
double stationarity_deviation(const MatrixElements& me, double tau,
                              const std::vector<std::pair<double, double>>& probes);

// ---- report assembly ----------------------------------------------------

struct Chi2Term {
    int k = 0, l = 0, m = 0;
    double contribution = 0.0;
};

struct Chi2Point {
    double T = 0.0;
    double value = 0.0;
    double truncation_delta = 0.0; // |value(K) - value(K + margin)|
    bool converged = true;
};

/// Every chi2 output evaluated at truncation K and again with the margin
/// states added; the difference drives the convergence flags.
struct Chi2Report {
    int K = 0;
    int margin = 0;
    double two_point_zero = 0.0;
    double sharp_moment4 = 0.0;
    double chi2_small = 0.0;
    double chi2_large = 0.0;
    double chi2_small_delta = 0.0;
    double chi2_large_delta = 0.0;
    bool chi2_small_converged = true;
    bool chi2_large_converged = true;
    double convergence_tolerance = 0.0;
    std::vector<Chi2Point> curve;
    std::vector<Chi2Term> leading_terms; // largest |contribution| in the small-window sum
    std::optional<double> energy_scale;
};

/// me_full must carry at least K + margin states.
Chi2Report build_chi2_report(const MatrixElements& me_full, int K, int margin,
                             const std::vector<double>& T_values,
                             double convergence_tolerance = 1e-3,
                             std::optional<double> energy_scale = std::nullopt);

} // namespace levylab
