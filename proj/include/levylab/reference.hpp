#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "levylab/schrodinger.hpp"

namespace levylab {

/// Exact harmonic-oscillator data in the shifted convention (E_0 = 0):
/// energies E_n = n omega and the tridiagonal position matrix with
/// q_{n,n+1} = sqrt((n+1) / (2 omega)).
MatrixElements ho_exact(double omega, int K);

// ---- closed-form reference models ---------------------------------------

enum class RefModel {
    HarmonicOscillator, // parameter omega
    CauchyExample,      // parameter a
    BesselExample,      // parameters b, rho
    AlphaExample,       // parameter alpha (sigma only; nothing else is closed)
};

/// Capability-typed closed forms. Absent capabilities throw CapabilityError,
/// so a missing formula can never be silently confused with a zero value.
class ClosedForms {
public:
    bool has_sigma() const { return bool(sigma_); }
    bool has_characteristic() const { return bool(characteristic_); }
    bool has_density() const { return bool(density_); }
    bool has_ground_state() const { return bool(ground_state_); }
    bool has_potential() const { return bool(potential_); }
    bool has_spectrum() const { return spectrum_omega_.has_value(); }

    double sigma(double y) const;
    double characteristic(double s) const;
    double density(double x) const;
    double ground_state(double x) const;
    double potential(double x) const;
    double energy(int n) const; // E_n = n omega, spectrum capability only

    std::string name() const { return name_; }

    friend ClosedForms closed_forms(RefModel model, double p1, double p2);

private:
    std::string name_;
    std::function<double(double)> sigma_, characteristic_, density_, ground_state_, potential_;
    std::optional<double> spectrum_omega_;
};

/// p1/p2 carry the model parameters: omega | a | (b, rho) | alpha.
ClosedForms closed_forms(RefModel model, double p1, double p2 = 0.0);

} // namespace levylab
