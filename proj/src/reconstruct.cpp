#include "levylab/reconstruct.hpp"

#include <cmath>
#include <numbers>

#include "levylab/errors.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

double choose_s_max(const LevyDensity& sigma, const InversionSettings& settings) {
    double s = settings.s_max_initial;
    const double cap = settings.s_max_initial * 1048576.0; // 2^20 doublings
    while (std::exp(-levy_exponent(sigma, s)) >= settings.c_tail_threshold) {
        s *= 2.0;
        if (s > cap)
            throw InversionError("choose_s_max: characteristic tail does not decay below "
                                 "threshold; exponent may be too flat");
    }
    return s;
}

DensityResult density_from_characteristic(const LevyDensity& sigma, double s_max,
                                          const GridSpec& grid,
                                          const InversionSettings& settings) {
    if (!(s_max > 0.0)) throw InversionError("density_from_characteristic: s_max must be positive");

    GridFunction rho = GridFunction::centered(grid.half_width, grid.points);
    const int n = rho.size();
    const int c = rho.center_index();

    // Simpson step bounded by pi / (oversampling * x_max) so the cos(s x)
    // factor is resolved at the widest grid point.
    const double ds_target = std::numbers::pi / (settings.oversampling * rho.x_max());
    int m = static_cast<int>(std::ceil(s_max / ds_target));
    if (m % 2 == 1) ++m;
    if (m < 2) m = 2;
    const double ds = s_max / m;

    // The exponent is evaluated once per node; each x reuses the table.
    Eigen::ArrayXd weights(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double simpson = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        weights[j] = simpson * std::exp(-levy_exponent(sigma, j * ds));
    }

    for (int i = c; i < n; ++i) {
        const double x = rho.x(i);
        CompensatedSum acc;
        for (int j = 0; j <= m; ++j) acc.add(weights[j] * std::cos(j * ds * x));
        rho[i] = acc.value() * ds / (3.0 * std::numbers::pi);
    }
    for (int k = 1; k <= c; ++k) rho[c - k] = rho[c + k];

    DensityResult out;
    out.s_max = s_max;
    out.simpson_nodes = m + 1;
    out.min_value = rho.values().minCoeff();

    const double peak = rho.values().maxCoeff();
    if (!(peak > 0.0))
        throw InversionError("density_from_characteristic: inverted density has no positive part");
    if (out.min_value < -settings.clip_fraction * peak)
        throw InversionError("density_from_characteristic: negative lobe exceeds the clip "
                             "tolerance; increase s_max or the grid resolution");
    rho.values() = rho.values().max(0.0);

    out.mass = rho.trapezoid();
    out.mass_within_tolerance = std::abs(out.mass - 1.0) <= settings.mass_tolerance;
    out.rho = std::move(rho);
    return out;
}

GridFunction ground_state(const GridFunction& rho, double clip_fraction) {
    const double peak = rho.values().maxCoeff();
    if (!(peak > 0.0)) throw InversionError("ground_state: density has no positive part");
    if (rho.values().minCoeff() < -clip_fraction * peak)
        throw InversionError("ground_state: density is negative beyond the clip tolerance");

    GridFunction phi(rho.dx(), rho.values().max(0.0).sqrt());
    const double norm = trapezoid_product(phi, phi);
    if (!(norm > 0.0)) throw InversionError("ground_state: zero norm");
    phi.values() /= std::sqrt(norm);
    return phi;
}

PotentialResult potential(const GridFunction& phi0, double floor_fraction) {
    const int c = phi0.center_index();
    const double floor = floor_fraction * phi0.values().maxCoeff();
    if (!(floor > 0.0)) throw InversionError("potential: ground state has no positive amplitude");

    // Largest symmetric window around the centre on which the amplitude
    // stays above the floor and the second difference has both neighbours.
    int h = 0;
    while (h + 1 <= c - 1 && phi0[c + h + 1] >= floor && phi0[c - h - 1] >= floor) ++h;
    const IndexWindow window{c - h, c + h};
    if (window.size() < 9)
        throw InversionError("potential: fewer than 9 grid points carry usable amplitude");

    const double dx2 = phi0.dx() * phi0.dx();
    GridFunction v(phi0.dx(), Eigen::ArrayXd::Zero(window.size()));
    for (int i = window.lo; i <= window.hi; ++i) {
        const double second = phi0[i + 1] - 2.0 * phi0[i] + phi0[i - 1];
        v[i - window.lo] = second / (2.0 * dx2 * phi0[i]);
    }

    PotentialResult out;
    out.V = v.symmetrized();
    out.window = window;
    out.floor = floor;
    return out;
}

} // namespace levylab
