#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "levylab/errors.hpp"
#include "levylab/grid.hpp"
#include "levylab/levy.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/reconstruct.hpp"
#include "levylab/reference.hpp"

using namespace levylab;

namespace {

const double kPi = std::numbers::pi;

double cauchy_rho(double x) { return 1.0 / (kPi * (1.0 + x * x)); }
double cauchy_phi0(double x) { return std::sqrt(cauchy_rho(x)); }
// phi0''/(2 phi0) for the Cauchy ground state.
double cauchy_V(double x) {
    const double u = 1.0 + x * x;
    return (2.0 * x * x - 1.0) / (2.0 * u * u);
}

} // namespace

TEST_CASE("grid function basics: abscissa, trapezoid, symmetry") {
    auto f = GridFunction::sampled(2.0, 9, [](double x) { return x * x; });
    CHECK(f.size() == 9);
    CHECK(f.dx() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.x(0) == -2.0);
    CHECK(f.x(4) == 0.0);
    CHECK(f.x(8) == 2.0);
    // Trapezoid of x^2 over [-2,2] on this grid: exact value 16/3 plus the
    // O(dx^2) rule error; for a quadratic the composite error is dx^2/6 * 4.
    CHECK(f.trapezoid() == doctest::Approx(16.0 / 3.0 + 0.5 * 0.5 / 6.0 * 4.0).epsilon(1e-12));
    CHECK(f.evenness_defect() == 0.0);

    auto g = GridFunction::sampled(2.0, 9, [](double x) { return x; });
    CHECK(g.evenness_defect() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(g.symmetrized().evenness_defect() == 0.0);
}

TEST_CASE("grid construction rejects bad shapes") {
    CHECK_THROWS_AS(GridFunction::centered(1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction::centered(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction::centered(-1.0, 9), std::invalid_argument);
}

TEST_CASE("monotone cubic preserves nonnegativity of decaying data") {
    Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(20, 0.0, 5.0);
    Eigen::ArrayXd y = (-x).exp();
    MonotoneCubic interp(x, y);
    for (double t = 0.0; t <= 5.0; t += 0.013) {
        CHECK(interp(t) >= 0.0);
        CHECK(interp(t) == doctest::Approx(std::exp(-t)).epsilon(2e-3));
    }
    // Clamps outside the abscissa.
    CHECK(interp(-1.0) == y[0]);
    CHECK(interp(9.0) == y[19]);
}

TEST_CASE("s_max doubling stops once the characteristic tail is small") {
    auto sigma = LevyDensity::cauchy_tail(1.0);
    const double s_max = choose_s_max(sigma);
    // exp(-s) < 1e-10 needs s > 23.03; doubling from 16 lands on 32.
    CHECK(s_max == doctest::Approx(32.0).epsilon(1e-15));
    CHECK(characteristic(sigma, s_max, 1.0) < 1e-10);
}

TEST_CASE("cauchy density inversion matches the closed form") {
    auto sigma = LevyDensity::cauchy_tail(1.0);
    auto res = density_from_characteristic(sigma, choose_s_max(sigma), GridSpec{});
    double sup = 0.0;
    for (int i = 0; i < res.rho.size(); ++i) {
        sup = std::max(sup, std::abs(res.rho[i] - cauchy_rho(res.rho.x(i))));
    }
    CHECK(sup < 1e-5);
    CHECK(res.rho.evenness_defect() == 0.0);
    CHECK(res.min_value > -1e-8 * res.rho.values().maxCoeff());
    CHECK(res.simpson_nodes > 100);
}

TEST_CASE("heavy tails leave measurable mass outside the grid and raise the flag") {
    auto sigma = LevyDensity::cauchy_tail(1.0);
    auto res = density_from_characteristic(sigma, choose_s_max(sigma), GridSpec{});
    // Mass inside |x| <= 12 is 2 atan(12)/pi, about 0.947: clearly flagged.
    CHECK_FALSE(res.mass_within_tolerance);
    CHECK(res.mass == doctest::Approx(2.0 * std::atan(12.0) / kPi).epsilon(1e-3));
}

TEST_CASE("exponential tails fit inside the grid and pass the mass check") {
    auto sigma = LevyDensity::bessel_k1(2.0, 2.0);
    auto res = density_from_characteristic(sigma, choose_s_max(sigma), GridSpec{});
    CHECK(res.mass_within_tolerance);
    CHECK(res.mass == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("truncating the characteristic integral rings and is rejected") {
    // s_max = 2 leaves a tail of exp(-2); the cosine transform then rings
    // with negative lobes far beyond the clip tolerance.
    auto sigma = LevyDensity::cauchy_tail(1.0);
    CHECK_THROWS_AS(density_from_characteristic(sigma, 2.0, GridSpec{}), InversionError);
}

TEST_CASE("ground state is the normalised square root of the density") {
    auto sigma = LevyDensity::cauchy_tail(1.0);
    auto res = density_from_characteristic(sigma, choose_s_max(sigma), GridSpec{});
    auto phi0 = ground_state(res.rho);

    GridFunction sq = phi0;
    sq.values() = phi0.values().square();
    CHECK(sq.trapezoid() == doctest::Approx(1.0).epsilon(1e-12));

    // The grid renormalisation divides out the truncated mass, so compare
    // phi0 * sqrt(mass) against the closed form.
    const double scale = std::sqrt(res.mass);
    double sup = 0.0;
    for (int i = 0; i < phi0.size(); ++i) {
        sup = std::max(sup, std::abs(phi0[i] * scale - cauchy_phi0(phi0.x(i))));
    }
    CHECK(sup < 2e-3);
}

TEST_CASE("ground state rejects densities with real negative lobes") {
    auto rho = GridFunction::sampled(4.0, 101, [](double x) { return std::exp(-x * x); });
    rho[30] = -0.1;
    CHECK_THROWS_AS(ground_state(rho), InversionError);
}

TEST_CASE("cauchy potential reconstruction matches phi0''/(2 phi0)") {
    auto sigma = LevyDensity::cauchy_tail(1.0);
    auto res = density_from_characteristic(sigma, choose_s_max(sigma), GridSpec{});
    auto pot = potential(ground_state(res.rho));

    CHECK(pot.window.size() == pot.V.size());
    CHECK(pot.floor > 0.0);

    double sup = 0.0;
    for (int i = 0; i < pot.V.size(); ++i) {
        const double x = pot.V.x(i);
        if (std::abs(x) > 8.0) continue; // density is tiny past there
        sup = std::max(sup, std::abs(pot.V[i] - cauchy_V(x)));
    }
    CHECK(sup < 1e-3);
}

TEST_CASE("oscillator ground state reconstructs the quadratic potential") {
    // phi0 = pi^-1/4 exp(-x^2/2) gives V = x^2/2 - 1/2 exactly; the second
    // difference contributes O(dx^2 x^4) near the edges.
    auto phi0 = GridFunction::sampled(5.0, 4001, [](double x) {
        return std::pow(kPi, -0.25) * std::exp(-x * x / 2.0);
    });
    auto pot = potential(phi0);
    double sup = 0.0;
    for (int i = 0; i < pot.V.size(); ++i) {
        const double x = pot.V.x(i);
        if (std::abs(x) > 4.5) continue;
        sup = std::max(sup, std::abs(pot.V[i] - (0.5 * x * x - 0.5)));
    }
    CHECK(sup < 2e-4);
}

TEST_CASE("potential keeps only points with usable amplitude") {
    // A narrow gaussian on a wide grid: the far wings fall below the
    // amplitude floor and must be excluded from the retained window.
    auto phi0 = GridFunction::sampled(20.0, 2001, [](double x) {
        return std::exp(-x * x / 2.0);
    });
    auto pot = potential(phi0);
    CHECK(pot.V.size() < phi0.size());
    CHECK(pot.V.size() >= 9);
    // Window is symmetric about the centre of the parent grid.
    CHECK(pot.window.lo + pot.window.hi == phi0.size() - 1);
    CHECK(pot.V.half_width() < 8.0); // exp(-32) is far below any sane floor
}

TEST_CASE("closed-form reference model agrees with the inline formulas") {
    auto ref = closed_forms(RefModel::CauchyExample, 1.0);
    for (double x : {0.0, 0.7, 2.0, 5.0}) {
        CHECK(ref.density(x) == doctest::Approx(cauchy_rho(x)).epsilon(1e-14));
        CHECK(ref.ground_state(x) == doctest::Approx(cauchy_phi0(x)).epsilon(1e-14));
        CHECK(ref.potential(x) == doctest::Approx(cauchy_V(x)).epsilon(1e-14));
    }
    CHECK(ref.sigma(2.0) == doctest::Approx(1.0 / (kPi * 4.0)).epsilon(1e-14));
    CHECK(ref.characteristic(1.5) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK_FALSE(ref.has_spectrum());
    CHECK_THROWS_AS(ref.energy(1), CapabilityError);
}

TEST_CASE("oscillator reference model carries the equally spaced spectrum") {
    auto ref = closed_forms(RefModel::HarmonicOscillator, 2.0);
    CHECK(ref.has_spectrum());
    CHECK(ref.energy(0) == 0.0);
    CHECK(ref.energy(3) == doctest::Approx(6.0).epsilon(1e-15));
    // Ground state of omega = 2: (omega/pi)^(1/4) exp(-omega x^2 / 2).
    const double x = 0.8;
    CHECK(ref.ground_state(x) ==
          doctest::Approx(std::pow(2.0 / kPi, 0.25) * std::exp(-x * x)).epsilon(1e-14));
    CHECK(ref.density(x) == doctest::Approx(ref.ground_state(x) * ref.ground_state(x)).epsilon(1e-14));
    CHECK(ref.potential(x) == doctest::Approx(0.5 * 4.0 * x * x - 1.0).epsilon(1e-14));
}

TEST_CASE("bessel reference reduces to the cauchy forms as rho -> 0") {
    auto bes = closed_forms(RefModel::BesselExample, 1.0, 1e-6);
    auto cau = closed_forms(RefModel::CauchyExample, 1.0);
    for (double s : {0.5, 1.0, 2.0}) {
        CHECK(bes.characteristic(s) == doctest::Approx(cau.characteristic(s)).epsilon(1e-5));
    }
    CHECK_FALSE(bes.has_potential());
}

TEST_CASE("bessel reference density is normalised") {
    auto bes = closed_forms(RefModel::BesselExample, 1.0, 1.0);
    auto r = integrate([&](double x) { return bes.density(x); }, -40.0, 40.0, 1e-12, 1e-10);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}
