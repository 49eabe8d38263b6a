#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "levylab/grid.hpp"
#include "levylab/interp.hpp"

namespace levylab {

// ---- even Levy density families ---------------------------------------
//
// Each family describes an even density sigma(y) >= 0 entering the pure-jump
// exponent psi(s) = Integral (1 - cos(s y)) sigma(y) dy over the real line.
// sigma may blow up at y = 0 like |y|^-alpha with alpha < 3; the integral
// stays finite because 1 - cos(sy) vanishes quadratically.

struct CauchyTailFamily {
    double a; // sigma(y) = a / (pi y^2)
};

struct BesselK1Family {
    double b;   // overall weight
    double rho; // exponential damping rate; sigma(y) = b rho K1(rho|y|) / (pi |y|)
};

struct AlphaFamilyDensity {
    double alpha; // sigma(y) = exp(-y^2) / (pi |y|^alpha), 2 <= alpha < 3
};

struct TabulatedFamily {
    GridFunction table;   // even, nonnegative samples of sigma on a symmetric grid
    MonotoneCubic interp; // built on the half-axis y >= 0
};

class LevyDensity {
public:
    static LevyDensity cauchy_tail(double a);
    static LevyDensity bessel_k1(double b, double rho);
    static LevyDensity alpha_family(double alpha);
    // Table must be even within 1e-12 (relative to its maximum) and
    // nonnegative; sigma is taken as zero beyond the tabulated extent.
    static LevyDensity tabulated(const GridFunction& sigma);

    // Pointwise sigma(y); y must be nonzero for the singular families.
    double operator()(double y) const;

    // Integral of y^{2k} sigma(y) over (0, eps]; analytic/series per family.
    // Used for the small-y piece of the exponent and for moments.
    double small_moment(int k, double eps) const;

    // Upper cutoff Y for the tail of (1 - cos(sy)) sigma(y), plus a closed
    // estimate of the piece beyond Y (one-sided, y > 0). The cutoff makes the
    // estimate's own error smaller than tol, so quadrature up to Y plus the
    // estimate carries the tail to that accuracy. For exponentially damped
    // families the whole tail is below tol there; for the heavy-tailed family
    // the estimate stays appreciable and must be added, never dropped.
    double tail_cutoff(double s, double tol) const;
    double tail_estimate(double s, double Y) const;

    // True when the 2p-th moment diverges for structural reasons
    // (power-law tails); tabulated densities are judged by truncation
    // comparison inside sigma_moment instead.
    bool moment_diverges(int p) const;

    bool is_tabulated() const { return std::holds_alternative<TabulatedFamily>(family_); }
    const TabulatedFamily& tabulated_family() const { return std::get<TabulatedFamily>(family_); }

    std::string family_name() const;
    std::vector<std::pair<std::string, double>> parameters() const;

private:
    explicit LevyDensity(std::variant<CauchyTailFamily, BesselK1Family,
                                      AlphaFamilyDensity, TabulatedFamily> f)
        : family_(std::move(f)) {}
    std::variant<CauchyTailFamily, BesselK1Family, AlphaFamilyDensity, TabulatedFamily> family_;
};

// ---- operations --------------------------------------------------------

/// psi(s) = Integral_R (1 - cos(s y)) sigma(y) dy. Even in s, psi(0) = 0.
double levy_exponent(const LevyDensity& sigma, double s);

/// C(s)^r = exp(-r psi(s)) for r > 0; values lie in (0, 1].
double characteristic(const LevyDensity& sigma, double s, double r);

struct MomentResult {
    double value = 0.0;   // +inf when divergent
    bool divergent = false;
};

/// Integral of y^{2p} sigma(y) dy over the real line (p >= 1), or a
/// divergence flag when the tail makes the moment infinite.
MomentResult sigma_moment(const LevyDensity& sigma, int p);

/// Samples of C(s)^power on a fixed nonnegative abscissa; evaluation at
/// other arguments is by exact lookup (|s| must match a sample within snap).
struct CharacteristicSamples {
    Eigen::ArrayXd s_values; // ascending, nonnegative
    Eigen::ArrayXd c_values; // in (0, 1]
    double power = 1.0;

    double value_at(double s, double snap = 1e-9) const;
};

/// Builds samples of C^r at every pairwise |p_i - p_j| of the probe points.
CharacteristicSamples sample_characteristic(const LevyDensity& sigma,
                                            const std::vector<double>& probe,
                                            double r);

/// Smallest eigenvalue of the Hermitian matrix M_ij = C^r(p_i - p_j).
/// Nonnegative (up to rounding) iff the sampled function is positive
/// semidefinite on the probe set, which is Bochner's criterion restricted
/// to finitely many points. Probe size is capped at 16.
double bochner_min_eigenvalue(const CharacteristicSamples& c, const std::vector<double>& probe);

} // namespace levylab
