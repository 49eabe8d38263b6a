#include "levylab/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "levylab/errors.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

namespace {

// Branch boundary for the window integral: at or below this value of
// L * max(a,b,c) the all-positive divided-difference series is used, above
// it the closed form. The series is cancellation-free but its term count
// grows linearly with L * mu, so the closed form takes over where the
// exponentials are strongly separated and cancellation is mild.
constexpr double kSeriesBranchMax = 40.0;
constexpr double kSeriesFallbackMax = 4000.0;
constexpr double kTaylorTrigger = 0.1; // |spread| * L below this: local Taylor
constexpr double kCancelTolerance = 1e-6;

// I(a,b,c;T) as the divided difference of e^{-mu L} over the five rates
// {a, b, c, 0, 0}, written as the everywhere-positive series
//   I = L^4 e^{-L mu_max} sum_j h_j(yhat) / (j+4)!
// with yhat_i = L (mu_max - mu_i) >= 0 and h_j the complete homogeneous
// symmetric polynomials, built by a rolling DP. Nodes are normalised by
// yhat_max and the running factor rho_j = rho_{j-1} yhat_max / (j+4)
// restores the scale, so nothing overflows for L mu_max up to several
// thousand in long double.
double window_series(double a, double b, double c, double L) {
    const long double Ld = L;
    const long double mumax = std::max({a, b, c});
    const long double ymax = Ld * mumax;
    if (ymax == 0.0L) return static_cast<double>(Ld * Ld * Ld * Ld / 24.0L);

    const long double z[5] = {(mumax - a) * Ld / ymax, (mumax - b) * Ld / ymax,
                              (mumax - c) * Ld / ymax, 1.0L, 1.0L};
    int jcap = static_cast<int>(ymax + 16.0L * sqrtl(ymax + 1.0L) + 80.0L);
    if (jcap > 12000) jcap = 12000;

    thread_local std::vector<long double> H;
    H.assign(jcap + 1, 0.0L);
    H[0] = 1.0L;
    for (int v = 0; v < 5; ++v) {
        if (z[v] == 0.0L) continue;
        for (int j = 1; j <= jcap; ++j) H[j] += z[v] * H[j - 1];
    }

    long double rho = Ld * Ld * Ld * Ld * expl(-ymax) / 24.0L;
    long double sum = 0.0L;
    for (int j = 0; j <= jcap; ++j) {
        const long double term = H[j] * rho;
        sum += term;
        if (j > 8 && term < 1e-21L * sum) break;
        rho *= ymax / (j + 5);
    }
    return static_cast<double>(sum);
}

// n-th derivative of f_p(mu) = e^{-mu L} / mu^p for p = 2 or 3. Every term
// of the inner sum carries the same sign, so the evaluation is stable.
double exp_power_derivative(int p, int n, double mu, double L) {
    const long double efac = expl(-static_cast<long double>(mu) * L);
    long double binom = 1.0L;
    long double lpow = powl(L, n);
    long double mupow = powl(mu, -static_cast<long double>(p));
    long double fact = 1.0L; // (i+1)! for p=2, (i+2)!/2 for p=3, at i=0
    long double s = 0.0L;
    for (int i = 0; i <= n; ++i) {
        s += binom * lpow * fact * mupow;
        binom *= static_cast<long double>(n - i) / (i + 1);
        lpow /= L;
        mupow /= mu;
        fact *= (p == 2) ? (i + 2) : (i + 3);
    }
    const long double sign = (n % 2 == 0) ? 1.0L : -1.0L;
    return static_cast<double>(sign * efac * s);
}

struct Piece {
    double value = 0.0;
    double budget = 0.0; // sum of |additive pieces|, drives the cancellation estimate
};

double f_of(int p, double mu, double L) {
    const double e = (mu * L > 700.0) ? 0.0 : std::exp(-mu * L);
    return e / std::pow(mu, p);
}

// First divided difference f_p[x, y]. Exactly coincident or tightly
// clustered nodes take the local Taylor form
//   f[x, y] = sum_{j even} f^{(1+j)}(m) delta^j / (1+j)!,  m = (x+y)/2,
// which has no subtraction; separated nodes divide directly, which loses
// at most a digit once |x - y| L or |x - y| / min(x,y) is appreciable.
Piece divided_difference2(int p, double x, double y, double L) {
    const double spread = std::abs(x - y);
    const double mn = std::min(x, y);
    if (spread * L < kTaylorTrigger && spread * 48.0 < mn) {
        const double m = 0.5 * (x + y);
        const double delta = 0.5 * (x - y);
        double dpow = 1.0;
        double fact = 1.0; // (1+j)!
        Piece out;
        for (int j = 0; j <= 16; j += 2) {
            if (j > 0) {
                dpow *= delta * delta;
                fact *= (j) * (j + 1.0);
            }
            const double term = exp_power_derivative(p, 1 + j, m, L) * dpow / fact;
            out.value += term;
            out.budget += std::abs(term);
            if (std::abs(term) < 1e-18 * (std::abs(out.value) + 1e-300)) break;
        }
        return out;
    }
    const double fx = f_of(p, x, L);
    const double fy = f_of(p, y, L);
    return {(fx - fy) / (x - y), (std::abs(fx) + std::abs(fy)) / spread};
}

// Complete homogeneous symmetric polynomials of three deviations.
void homogeneous3(const double d[3], int jmax, double* h) {
    for (int j = 0; j <= jmax; ++j) h[j] = 0.0;
    h[0] = 1.0;
    for (int v = 0; v < 3; ++v)
        for (int j = 1; j <= jmax; ++j) h[j] += d[v] * h[j - 1];
}

// Second divided difference of f_2 over three positive nodes.
Piece divided_difference3(double a, double b, double c, double L) {
    double x = a, y = b, z = c;
    if (x > y) std::swap(x, y);
    if (y > z) std::swap(y, z);
    if (x > y) std::swap(x, y);

    const double span = z - x;
    if (span * L < kTaylorTrigger && span * 48.0 < x) {
        const double m = (x + y + z) / 3.0;
        const double d[3] = {x - m, y - m, z - m};
        constexpr int jmax = 16;
        double h[jmax + 1];
        homogeneous3(d, jmax, h);
        double fact = 2.0; // (2+j)!
        Piece out;
        for (int j = 0; j <= jmax; ++j) {
            if (j > 0) fact *= (j + 2.0);
            const double term = exp_power_derivative(2, 2 + j, m, L) * h[j] / fact;
            out.value += term;
            out.budget += std::abs(term);
            if (std::abs(term) < 1e-18 * (std::abs(out.value) + 1e-300)) break;
        }
        return out;
    }
    const Piece lo = divided_difference2(2, x, y, L);
    const Piece hi = divided_difference2(2, y, z, L);
    return {(lo.value - hi.value) / (x - z), (lo.budget + hi.budget) / span};
}

} // namespace

double two_point(const MatrixElements& me, double lag) {
    if (lag < 0.0) throw std::domain_error("two_point: lag must be nonnegative");
    const int K = static_cast<int>(me.q.rows());
    CompensatedSum acc;
    for (int n = 1; n < K; ++n) {
        const double q = me.q(0, n);
        const double el = me.energies[n] * lag;
        acc.add(q * q * ((el > 700.0) ? 0.0 : std::exp(-el)));
    }
    return acc.value();
}

double sharp_moment4(const MatrixElements& me) {
    const int K = static_cast<int>(me.q.rows());
    CompensatedSum acc;
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l)
            for (int m = 0; m < K; ++m)
                acc.add(me.q(0, k) * me.q(k, l) * me.q(l, m) * me.q(m, 0));
    return acc.value();
}

double chi2_small(const MatrixElements& me) {
    const int K = static_cast<int>(me.q.rows());
    CompensatedSum acc;
    for (int k = 1; k < K; ++k)
        for (int l = 1; l < K; ++l)
            for (int m = 1; m < K; ++m)
                acc.add(me.q(0, k) * me.q(k, l) * me.q(l, m) * me.q(m, 0));
    const double tp0 = two_point(me, 0.0);
    return acc.value() - 2.0 * tp0 * tp0;
}

double chi2_large(const MatrixElements& me) {
    const int K = static_cast<int>(me.q.rows());
    CompensatedSum principal;
    for (int k = 1; k < K; ++k)
        for (int l = 1; l < K; ++l)
            for (int m = 1; m < K; ++m)
                principal.add(me.q(0, k) * me.q(k, l) * me.q(l, m) * me.q(m, 0) /
                              (me.energies[k] * me.energies[l] * me.energies[m]));
    CompensatedSum cross;
    for (int k = 1; k < K; ++k)
        for (int m = 1; m < K; ++m)
            cross.add(me.q(0, k) * me.q(0, k) * me.q(0, m) * me.q(0, m) /
                      (me.energies[k] * me.energies[m] * me.energies[m]));
    return 24.0 * principal.value() - 24.0 * cross.value();
}

double ordered_window_integral(double a, double b, double c, double T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::domain_error("ordered_window_integral: T must be positive");
    if (!(a > 0.0) || !(c > 0.0) || !(b >= 0.0) ||
        !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw std::domain_error("ordered_window_integral: rates must satisfy a,c > 0, b >= 0");

    const double L = 2.0 * T;
    const double mumax = std::max({a, b, c});
    if (L * mumax <= kSeriesBranchMax) return window_series(a, b, c, L);

    double value = 0.0, budget = 0.0;
    if (b > 0.0) {
        const double inv_sum = 1.0 / a + 1.0 / b + 1.0 / c;
        const double p1 = L / (a * b * c);
        const double p2 = inv_sum / (a * b * c);
        const Piece dd = divided_difference3(a, b, c, L);
        value = (p1 - p2) + dd.value;
        budget = p1 + p2 + dd.budget;
    } else {
        const double ia = 1.0 / a, ic = 1.0 / c;
        const double r1 = L * L * ia * ic / 2.0;
        const double r2 = L * (ia + ic) * ia * ic;
        const double r3 = ((ia + ic) * (ia + ic) + ia * ia + ic * ic) * ia * ic / 2.0;
        const Piece dd = divided_difference2(3, a, c, L);
        value = (r1 - r2) + r3 + dd.value;
        budget = r1 + r2 + r3 + dd.budget;
    }

    const double est = 2.3e-16 * budget / std::max(std::abs(value), 1e-300);
    if (value > 0.0 && est <= kCancelTolerance) return value;
    if (L * mumax <= kSeriesFallbackMax) return window_series(a, b, c, L);
    throw CancellationError("ordered_window_integral: closed form cancelled beyond recovery at "
                            "L*mu = " + std::to_string(L * mumax));
}

double two_point_window_integral(double E, double T) {
    if (!(E > 0.0)) throw std::domain_error("two_point_window_integral: E must be positive");
    if (!(T > 0.0)) throw std::domain_error("two_point_window_integral: T must be positive");
    const double L = 2.0 * T;
    return 2.0 * L * L * phi2(-E * L);
}

double chi2_exact(const MatrixElements& me, double T, std::optional<double> energy_scale) {
    if (!(T > 0.0)) throw std::domain_error("chi2_exact: T must be positive");
    if (energy_scale && !(*energy_scale > 0.0))
        throw std::domain_error("chi2_exact: energy scale must be positive");
    const int K = static_cast<int>(me.q.rows());
    if (K < 2) throw std::domain_error("chi2_exact: need at least two states");

    CompensatedSum quartic;
    for (int k = 1; k < K; ++k)
        for (int l = 0; l < K; ++l)
            for (int m = 1; m < K; ++m) {
                const double coef = me.q(0, k) * me.q(k, l) * me.q(l, m) * me.q(m, 0);
                if (coef == 0.0) continue;
                quartic.add(coef * ordered_window_integral(me.energies[k], me.energies[l],
                                                           me.energies[m], T));
            }

    CompensatedSum pair;
    for (int k = 1; k < K; ++k)
        pair.add(me.q(0, k) * me.q(0, k) * two_point_window_integral(me.energies[k], T));

    const double g4 = 24.0 * quartic.value() - 3.0 * pair.value() * pair.value();
    const double z = energy_scale ? (*energy_scale * 2.0 * T) : 2.0 * T;
    const double window = (1.0 + z) * (1.0 + z) * (1.0 + z) / (z * z * z * z);
    return window * g4;
}

double stationarity_deviation(const MatrixElements& me, double tau,
                              const std::vector<std::pair<double, double>>& probes) {
    double worst = 0.0;
    for (const auto& [t, u] : probes) {
        const double shifted = two_point(me, std::abs((t + tau) - (u + tau)));
        const double base = two_point(me, std::abs(t - u));
        worst = std::max(worst, std::abs(shifted - base));
    }
    return worst;
}

// ---- report assembly --------------------------------------------------------

Chi2Report build_chi2_report(const MatrixElements& me_full, int K, int margin,
                             const std::vector<double>& T_values, double convergence_tolerance,
                             std::optional<double> energy_scale) {
    if (margin < 0) throw std::domain_error("build_chi2_report: margin must be nonnegative");
    if (K < 2) throw std::domain_error("build_chi2_report: need at least two states");
    if (K + margin > me_full.q.rows())
        throw std::domain_error("build_chi2_report: fewer states available than K + margin");

    const MatrixElements base = truncate(me_full, K);
    const MatrixElements wide = truncate(me_full, K + margin);

    Chi2Report report;
    report.K = K;
    report.margin = margin;
    report.convergence_tolerance = convergence_tolerance;
    report.energy_scale = energy_scale;
    report.two_point_zero = two_point(base, 0.0);
    report.sharp_moment4 = sharp_moment4(base);

    auto agreement = [convergence_tolerance](double v, double w) {
        return std::abs(v - w) <= convergence_tolerance * std::max(std::abs(v), 1e-9);
    };

    report.chi2_small = chi2_small(base);
    report.chi2_small_delta = std::abs(report.chi2_small - chi2_small(wide));
    report.chi2_small_converged = agreement(report.chi2_small, chi2_small(wide));
    report.chi2_large = chi2_large(base);
    report.chi2_large_delta = std::abs(report.chi2_large - chi2_large(wide));
    report.chi2_large_converged = agreement(report.chi2_large, chi2_large(wide));

    for (double T : T_values) {
        Chi2Point point;
        point.T = T;
        point.value = chi2_exact(base, T, energy_scale);
        const double widened = chi2_exact(wide, T, energy_scale);
        point.truncation_delta = std::abs(point.value - widened);
        point.converged = agreement(point.value, widened);
        report.curve.push_back(point);
    }

    std::vector<Chi2Term> terms;
    terms.reserve(static_cast<std::size_t>(K - 1) * (K - 1) * (K - 1));
    for (int k = 1; k < K; ++k)
        for (int l = 1; l < K; ++l)
            for (int m = 1; m < K; ++m) {
                const double contribution =
                    base.q(0, k) * base.q(k, l) * base.q(l, m) * base.q(m, 0);
                terms.push_back({k, l, m, contribution});
            }
    const std::size_t keep = std::min<std::size_t>(8, terms.size());
    std::partial_sort(terms.begin(), terms.begin() + keep, terms.end(),
                      [](const Chi2Term& lhs, const Chi2Term& rhs) {
                          if (std::abs(lhs.contribution) != std::abs(rhs.contribution))
                              return std::abs(lhs.contribution) > std::abs(rhs.contribution);
                          return std::tie(lhs.k, lhs.l, lhs.m) < std::tie(rhs.k, rhs.l, rhs.m);
                      });
    terms.resize(keep);
    report.leading_terms = std::move(terms);
    return report;
}

} // namespace levylab
