#pragma once

#include "levylab/grid.hpp"
#include "levylab/levy.hpp"

namespace levylab {

struct GridSpec {
    double half_width = 12.0;
    int points = 2001;
};

struct InversionSettings {
    double s_max_initial = 16.0;   // starting value for the doubling search
    double c_tail_threshold = 1e-10; // require C(s_max) below this
    int oversampling = 8;          // Simpson step = pi / (oversampling * x_max)
    double clip_fraction = 1e-8;   // negative lobes beyond this fraction of max(rho) are errors
    double mass_tolerance = 1e-6;  // |trapezoid(rho) - 1| beyond this raises the mass flag
};

/// Doubles s_max from its initial value until exp(-psi(s_max)) falls below
/// the tail threshold. Throws InversionError if the characteristic does not
/// decay (cap at 2^20 times the initial value).
double choose_s_max(const LevyDensity& sigma, const InversionSettings& settings = {});

struct DensityResult {
    GridFunction rho;
    double s_max = 0.0;
    int simpson_nodes = 0;
    double mass = 0.0;          // trapezoid integral after clipping
    double min_value = 0.0;     // most negative raw value (before clipping)
    bool mass_within_tolerance = false;
};

/// Cosine-transform inversion rho(x) = (1/pi) Int_0^smax cos(sx) e^{-psi(s)} ds
/// on the symmetric grid. Small negative lobes (within clip_fraction of the
/// maximum) are clipped to zero; anything worse is an InversionError.
DensityResult density_from_characteristic(const LevyDensity& sigma, double s_max,
                                          const GridSpec& grid,
                                          const InversionSettings& settings = {});

/// phi0 = sqrt(max(rho, 0)) renormalised so that trapezoid(phi0^2) = 1.
/// rho must be nonnegative up to clip_fraction * max(rho).
GridFunction ground_state(const GridFunction& rho, double clip_fraction = 1e-8);

struct PotentialResult {
    GridFunction V;       // on the retained symmetric subgrid
    IndexWindow window;   // retained index range on the input grid
    double floor = 0.0;   // absolute amplitude threshold that defined the mask
};

/// V = (second difference of phi0) / (2 phi0), computed where the amplitude
/// is at least floor_fraction * max(phi0) and both neighbours exist, then
/// symmetrised. At least 9 points must survive.
PotentialResult potential(const GridFunction& phi0, double floor_fraction = 1e-8);

} // namespace levylab
