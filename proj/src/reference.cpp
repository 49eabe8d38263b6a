#include "levylab/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "levylab/errors.hpp"
#include "levylab/special.hpp"

namespace levylab {

MatrixElements ho_exact(double omega, int K) {
    if (!(omega > 0.0)) throw std::domain_error("ho_exact: omega must be positive");
    if (K < 2) throw std::domain_error("ho_exact: need at least two states");
    MatrixElements me;
    me.energies = Eigen::VectorXd::Zero(K);
    me.q = Eigen::MatrixXd::Zero(K, K);
    for (int n = 0; n < K; ++n) me.energies[n] = n * omega;
    for (int n = 0; n + 1 < K; ++n) {
        const double v = std::sqrt((n + 1) / (2.0 * omega));
        me.q(n, n + 1) = v;
        me.q(n + 1, n) = v;
    }
    return me;
}

// ---- closed-form reference models ----------------------------------------

double ClosedForms::sigma(double y) const {
    if (!sigma_) throw CapabilityError(name_ + ": no closed-form sigma");
    return sigma_(y);
}

double ClosedForms::characteristic(double s) const {
    if (!characteristic_) throw CapabilityError(name_ + ": no closed-form characteristic");
    return characteristic_(s);
}

double ClosedForms::density(double x) const {
    if (!density_) throw CapabilityError(name_ + ": no closed-form density");
    return density_(x);
}

double ClosedForms::ground_state(double x) const {
    if (!ground_state_) throw CapabilityError(name_ + ": no closed-form ground state");
    return ground_state_(x);
}

double ClosedForms::potential(double x) const {
    if (!potential_) throw CapabilityError(name_ + ": no closed-form potential");
    return potential_(x);
}

double ClosedForms::energy(int n) const {
    if (!spectrum_omega_) throw CapabilityError(name_ + ": no closed-form spectrum");
    if (n < 0) throw std::domain_error("energy: level index must be nonnegative");
    return n * (*spectrum_omega_);
}

ClosedForms closed_forms(RefModel model, double p1, double p2) {
    ClosedForms cf;
    const double pi = std::numbers::pi;

    switch (model) {
    case RefModel::HarmonicOscillator: {
        const double w = p1;
        if (!(w > 0.0)) throw std::domain_error("closed_forms: omega must be positive");
        cf.name_ = "harmonic_oscillator";
        cf.characteristic_ = [w](double s) { return std::exp(-s * s / (4.0 * w)); };
        cf.density_ = [w, pi](double x) { return std::sqrt(w / pi) * std::exp(-w * x * x); };
        cf.ground_state_ = [w, pi](double x) {
            return std::pow(w / pi, 0.25) * std::exp(-0.5 * w * x * x);
        };
        // Shifted so the ground-state energy is zero.
        cf.potential_ = [w](double x) { return 0.5 * w * w * x * x - 0.5 * w; };
        cf.spectrum_omega_ = w;
        break;
    }
    case RefModel::CauchyExample: {
        const double a = p1;
        if (!(a > 0.0)) throw std::domain_error("closed_forms: a must be positive");
        cf.name_ = "cauchy";
        cf.sigma_ = [a, pi](double y) { return a / (pi * y * y); };
        cf.characteristic_ = [a](double s) { return std::exp(-a * std::abs(s)); };
        cf.density_ = [a, pi](double x) { return a / (pi * (a * a + x * x)); };
        cf.ground_state_ = [a, pi](double x) { return std::sqrt(a / pi) / std::sqrt(a * a + x * x); };
        // phi0'' / (2 phi0) for phi0 = (a^2 + x^2)^{-1/2}, up to normalisation.
        cf.potential_ = [a](double x) {
            const double r2 = a * a + x * x;
            return (2.0 * x * x - a * a) / (2.0 * r2 * r2);
        };
        break;
    }
    case RefModel::BesselExample: {
        const double b = p1, r = p2;
        if (!(b > 0.0) || !(r > 0.0))
            throw std::domain_error("closed_forms: b and rho must be positive");
        cf.name_ = "bessel_k1";
        cf.sigma_ = [b, r, pi](double y) {
            const double ay = std::abs(y);
            return b * r * bessel_k1(r * ay) / (pi * ay);
        };
        cf.characteristic_ = [b, r](double s) {
            return std::exp(b * r - b * std::sqrt(s * s + r * r));
        };
        cf.density_ = [b, r, pi](double x) {
            const double u = std::sqrt(x * x + b * b);
            return (b * r / pi) * bessel_k1(r * u) / u * std::exp(b * r);
        };
        cf.ground_state_ = [b, r, pi](double x) {
            const double u = std::sqrt(x * x + b * b);
            return std::sqrt((b * r / pi) * bessel_k1(r * u) / u * std::exp(b * r));
        };
        break;
    }
    case RefModel::AlphaExample: {
        const double alpha = p1;
        if (!(alpha >= 2.0 && alpha < 3.0))
            throw std::domain_error("closed_forms: alpha must lie in [2, 3)");
        cf.name_ = "alpha";
        cf.sigma_ = [alpha, pi](double y) {
            const double ay = std::abs(y);
            return std::exp(-y * y) / (pi * std::pow(ay, alpha));
        };
        break;
    }
    }
    return cf;
}

} // namespace levylab
