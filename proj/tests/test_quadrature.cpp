#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "levylab/errors.hpp"
#include "levylab/quadrature.hpp"

using namespace levylab;

TEST_CASE("gaussian integral over a wide interval") {
    auto r = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(r.error_estimate < 1e-10);
}

TEST_CASE("oscillatory integrand forces subdivision and still converges") {
    auto r = integrate([](double x) { return std::cos(x); }, 0.0, 20.0);
    CHECK(r.value == doctest::Approx(std::sin(20.0)).epsilon(1e-12));
    CHECK(r.subdivisions >= 1);
}

TEST_CASE("integrable endpoint singularity 1/sqrt(x)") {
    // Gauss-Kronrod nodes are interior, so x = 0 is never evaluated.
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                       1e-12, 1e-10, 4000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("log singularity at the left endpoint") {
    auto r = integrate([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("divergent integrand exhausts subdivisions and throws") {
    bool threw = false;
    try {
        integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 1e-10, 50);
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(std::isfinite(e.partial_sum()));
        CHECK(e.error_estimate() > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("tolerance scaling: looser tolerance never needs more subdivisions") {
    auto f = [](double x) { return std::sin(10.0 * x) / (1.0 + x * x); };
    auto tight = integrate(f, 0.0, 10.0, 1e-14, 1e-13);
    auto loose = integrate(f, 0.0, 10.0, 1e-6, 1e-6);
    CHECK(loose.subdivisions <= tight.subdivisions);
    CHECK(loose.value == doctest::Approx(tight.value).epsilon(1e-6));
}

TEST_CASE("compensated sum holds small addends against a large total") {
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 10000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == doctest::Approx(10000.0).epsilon(1e-12));
}

TEST_CASE("compensated sum of many equal terms is exact to the last bit") {
    // 0.1 is inexact in binary; naive summation drifts by ~1e-9 over 1e7 adds.
    CompensatedSum s;
    for (int i = 0; i < 10000000; ++i) s.add(0.1);
    CHECK(std::abs(s.value() - 1e6) < 1e-9);
}

TEST_CASE("phi2 matches its defining expression away from zero") {
    for (double z : {-3.0, -0.8, 0.8, 2.5}) {
        const double direct = (std::exp(z) - 1.0 - z) / (z * z);
        CHECK(phi2(z) == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("phi2 is smooth through zero and across the series seam") {
    CHECK(phi2(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // Series/direct handoff near |z| = 0.5: both branches must match the
    // defining expression, which has no damaging cancellation there.
    for (double z : {0.4999999, 0.5000001, -0.4999999, -0.5000001}) {
        const double direct = (std::exp(z) - 1.0 - z) / (z * z);
        CHECK(phi2(z) == doctest::Approx(direct).epsilon(5e-14));
    }
    // Tiny arguments: phi2(z) = 1/2 + z/6 + O(z^2).
    CHECK(phi2(1e-9) == doctest::Approx(0.5 + 1e-9 / 6.0).epsilon(1e-15));
}

TEST_CASE("phi2 stays accurate for large negative arguments") {
    // (e^z - 1 - z)/z^2 -> (-1 - z)/z^2 as z -> -inf; no cancellation there.
    const double z = -60.0;
    CHECK(phi2(z) == doctest::Approx((std::exp(z) - 1.0 - z) / (z * z)).epsilon(1e-14));
}
