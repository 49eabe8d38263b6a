// Acceptance gate for levylab.
//
// Each criterion runs standalone, prints indented detail lines with the
// measured numbers, then exactly one [PASS] or [FAIL] verdict line. Wall
// time per criterion is checked against the pinned budget. The process
// exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levylab/config.hpp"
#include "levylab/correlators.hpp"
#include "levylab/grid.hpp"
#include "levylab/io.hpp"
#include "levylab/levy.hpp"
#include "levylab/pipeline.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/reconstruct.hpp"
#include "levylab/reference.hpp"
#include "levylab/sampler.hpp"
#include "levylab/schrodinger.hpp"
#include "levylab/special.hpp"

using namespace levylab;

namespace {

// ---------------------------------------------------------------------------
// harness
// ---------------------------------------------------------------------------

struct CheckFailure {
    std::string message;
};

#define REQUIRE(cond, msg)                                         \
    do {                                                           \
        if (!(cond)) {                                             \
            std::ostringstream oss_;                               \
            oss_ << std::setprecision(12) << __FILE__ << ":"       \
                 << __LINE__ << " " << msg;                        \
            throw CheckFailure{oss_.str()};                        \
        }                                                          \
    } while (0)

void require_close(const char* name, double measured, double expected,
                   double rel_tol) {
    REQUIRE(std::isfinite(measured), name << " is not finite");
    const double rel =
        std::abs(measured - expected) / std::max(std::abs(expected), 1e-300);
    REQUIRE(rel <= rel_tol, name << " = " << measured << ", expected "
                                 << expected << " (rel dev " << rel
                                 << ", tol " << rel_tol << ")");
}

void require_small(const char* name, double measured, double abs_tol) {
    REQUIRE(std::isfinite(measured), name << " is not finite");
    REQUIRE(std::abs(measured) <= abs_tol,
            name << " = " << measured << ", |.| exceeds " << abs_tol);
}

int g_failures = 0;

void run_criterion(int number, const char* name, double limit_s,
                   void (*body)()) {
    const auto start = std::chrono::steady_clock::now();
    try {
        body();
    } catch (const CheckFailure& f) {
        std::cout << "[FAIL] criterion " << number << " (" << name
                  << "): " << f.message << "\n";
        ++g_failures;
        return;
    } catch (const std::exception& e) {
        std::cout << "[FAIL] criterion " << number << " (" << name
                  << "): unexpected exception: " << e.what() << "\n";
        ++g_failures;
        return;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (limit_s > 0.0 && elapsed > limit_s) {
        std::cout << "[FAIL] criterion " << number << " (" << name
                  << "): runtime " << elapsed << " s exceeds budget "
                  << limit_s << " s\n";
        ++g_failures;
        return;
    }
    std::cout << "[PASS] criterion " << number << " (" << name << ") ["
              << std::fixed << std::setprecision(2) << elapsed << " s]\n"
              << std::defaultfloat << std::setprecision(12);
}

// ---------------------------------------------------------------------------
// reconstruction chains, built once and shared across criteria
// ---------------------------------------------------------------------------

struct Chain {
    GridFunction rho;
    GridFunction phi0;
    PotentialResult pot;
    MatrixElements me;
};

Chain build_chain(const LevyDensity& sigma, int n_states,
                  const GridSpec& grid) {
    const double s_max = choose_s_max(sigma);
    DensityResult den = density_from_characteristic(sigma, s_max, grid);
    GridFunction phi0 = ground_state(den.rho);
    PotentialResult pot = potential(phi0);
    Spectrum spec = solve(pot.V, n_states);
    MatrixElements me = matrix_elements(spec);
    return Chain{std::move(den.rho), std::move(phi0), std::move(pot),
                 std::move(me)};
}

// Alpha family chains carry states + margin = 28 + 4 levels.
const Chain& alpha_chain(double alpha) {
    static std::map<int, Chain> cache;
    const int key = static_cast<int>(std::lround(alpha * 100.0));
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache
                 .emplace(key, build_chain(LevyDensity::alpha_family(alpha),
                                           32, GridSpec{12.0, 2001}))
                 .first;
    }
    return it->second;
}

const Chain& cauchy_chain() {
    static std::optional<Chain> chain;
    if (!chain) {
        chain = build_chain(LevyDensity::cauchy_tail(1.0), 12,
                            GridSpec{12.0, 2001});
    }
    return *chain;
}

// ---------------------------------------------------------------------------
// criterion 1: exact oscillator matrix elements sit at the zero point of
// both window limits
// ---------------------------------------------------------------------------

void criterion1() {
    const MatrixElements me = ho_exact(1.0, 30);
    const double small_limit = chi2_small(me);
    const double large_limit = chi2_large(me);
    std::cout << "  chi2_small = " << small_limit
              << ", chi2_large = " << large_limit << "\n";
    require_small("oscillator chi2_small", small_limit, 1e-12);
    require_small("oscillator chi2_large", large_limit, 1e-12);
}

// ---------------------------------------------------------------------------
// criterion 2: the exact finite-window curve vanishes on the oscillator
// ---------------------------------------------------------------------------

void criterion2() {
    const MatrixElements me = ho_exact(1.0, 30);
    std::cout << "  chi2_exact:";
    for (double t : {0.1, 1.0, 10.0}) {
        const double value = chi2_exact(me, t);
        std::cout << " T=" << t << " -> " << value;
        require_small("oscillator chi2_exact", value, 1e-10);
    }
    std::cout << "\n";
}

// ---------------------------------------------------------------------------
// criterion 3: numeric eigensolver on the oscillator potential
// ---------------------------------------------------------------------------

void criterion3() {
    const GridFunction v = GridFunction::sampled(
        12.0, 2001, [](double x) { return 0.5 * x * x - 0.5; });
    const Spectrum spec = solve(v, 10);
    const MatrixElements me = matrix_elements(spec);

    double worst_rel = 0.0;
    int worst_n = 0;
    for (int n = 1; n <= 8; ++n) {
        const double rel = std::abs(me.energies[n] - n) / n;
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_n = n;
        }
    }
    const double q01 = me.q(0, 1);
    const double q12 = me.q(1, 2);
    std::cout << "  worst level rel dev = " << worst_rel << " (n = " << worst_n
              << "), e0_raw = " << spec.e0_raw << "\n";
    std::cout << "  q01 = " << q01 << " (target 1/sqrt(2)), q12 = " << q12
              << " (target 1)\n";
    REQUIRE(worst_rel <= 1e-3, "level " << worst_n << " rel dev " << worst_rel
                                        << " exceeds 1e-3");
    require_close("q01", q01, 1.0 / std::sqrt(2.0), 1e-4 * std::sqrt(2.0));
    REQUIRE(std::abs(q12 - 1.0) <= 1e-4,
            "q12 = " << q12 << ", off target 1 by more than 1e-4");
    for (int k = 0; k < spec.n_states(); ++k) {
        const int expected = (k % 2 == 0) ? 1 : -1;
        REQUIRE(spec.parity[k] == expected,
                "parity of state " << k << " is " << spec.parity[k]
                                   << ", expected " << expected);
    }
}

// ---------------------------------------------------------------------------
// criterion 4: heavy-tail family, full chain against closed forms
// ---------------------------------------------------------------------------

void criterion4() {
    const LevyDensity sigma = LevyDensity::cauchy_tail(1.0);
    for (double s : {0.5, 1.0, 2.0}) {
        require_close("exponent psi(s)", levy_exponent(sigma, s), s, 1e-6);
    }

    const Chain& chain = cauchy_chain();
    const double pi = std::acos(-1.0);

    double rho_sup = 0.0;
    double rho_sup_x = 0.0;
    for (int i = 0; i < chain.rho.size(); ++i) {
        const double x = chain.rho.x(i);
        if (std::abs(x) > 10.0) continue;
        const double dev = std::abs(chain.rho[i] - 1.0 / (pi * (1.0 + x * x)));
        if (dev > rho_sup) {
            rho_sup = dev;
            rho_sup_x = x;
        }
    }
    std::cout << "  density sup dev on |x| <= 10: " << rho_sup << " at x = "
              << rho_sup_x << "\n";
    REQUIRE(rho_sup <= 1e-4, "density sup dev " << rho_sup
                                                << " at x = " << rho_sup_x
                                                << " exceeds 1e-4");

    const GridFunction& v = chain.pot.V;
    double v_sup = 0.0;
    double v_sup_x = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        const double x = v.x(i);
        const double u = 1.0 + x * x;
        const double target = (2.0 * x * x - 1.0) / (2.0 * u * u);
        const double dev = std::abs(v[i] - target);
        if (dev > v_sup) {
            v_sup = dev;
            v_sup_x = x;
        }
    }
    std::cout << "  potential sup dev vs (2x^2-1)/(2(1+x^2)^2) on [" << v.x_min()
              << ", " << v.x_max() << "]: " << v_sup << " at x = " << v_sup_x
              << "\n";
    REQUIRE(v_sup <= 1e-3, "potential sup dev " << v_sup << " at x = "
                                                << v_sup_x << " exceeds 1e-3");
}

// ---------------------------------------------------------------------------
// criterion 5: exponential-tail family against closed forms
// ---------------------------------------------------------------------------

double k1_integral_oracle(double x) {
    // K1(x) = int_0^inf cosh(t) exp(-x cosh t) dt; the integrand is below
    // the double underflow threshold once x cosh t > 745.
    const double t_max = std::acosh(745.0 / x);
    return integrate([x](double t) { return std::cosh(t) *
                                            std::exp(-x * std::cosh(t)); },
                     0.0, t_max, 1e-16, 1e-13)
        .value;
}

void criterion5() {
    const LevyDensity sigma = LevyDensity::bessel_k1(1.0, 1.0);
    for (double s : {0.5, 1.0, 2.0}) {
        const double measured = characteristic(sigma, s, 1.0);
        const double target = std::exp(-(std::sqrt(s * s + 1.0) - 1.0));
        require_close("characteristic C(s)", measured, target, 1e-6);
    }

    double k1_worst = 0.0;
    for (double x : {0.5, 1.0, 5.0}) {
        const double oracle = k1_integral_oracle(x);
        const double measured = bessel_k1(x);
        const double rel = std::abs(measured - oracle) / oracle;
        k1_worst = std::max(k1_worst, rel);
        REQUIRE(rel <= 1e-10, "K1(" << x << ") = " << measured
                                    << " vs integral oracle " << oracle
                                    << " (rel dev " << rel << ")");
    }
    std::cout << "  K1 vs integral oracle, worst rel dev: " << k1_worst << "\n";

    const LevyDensity nearly_cauchy = LevyDensity::bessel_k1(1.0, 1e-3);
    double limit_worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        const double rel =
            std::abs(levy_exponent(nearly_cauchy, s) - s) / s;
        limit_worst = std::max(limit_worst, rel);
        REQUIRE(rel <= 1e-2, "exponent at rho = 1e-3, s = "
                                 << s << ": rel dev from |s| is " << rel);
    }
    std::cout << "  rho -> 0 exponent limit, worst rel dev: " << limit_worst
              << "\n";
}

// ---------------------------------------------------------------------------
// criterion 6: power-law family moment identities through the full pipeline
// ---------------------------------------------------------------------------

void criterion6() {
    const double pi = std::acos(-1.0);
    for (double alpha : {2.0, 2.5}) {
        const Chain& chain = alpha_chain(alpha);
        const MatrixElements me = truncate(chain.me, 28);
        const double small_limit = chi2_small(me);
        const double small_target = std::tgamma((5.0 - alpha) / 2.0) / pi;
        const double tp0 = two_point(me, 0.0);
        const double tp0_target = std::tgamma((3.0 - alpha) / 2.0) / pi;
        std::cout << "  alpha = " << alpha << ": chi2_small = " << small_limit
                  << " (target " << small_target << ", rel dev "
                  << std::abs(small_limit - small_target) / small_target
                  << ")\n";
        std::cout << "  alpha = " << alpha << ": two_point(0) = " << tp0
                  << " (target " << tp0_target << ", rel dev "
                  << std::abs(tp0 - tp0_target) / tp0_target << ")\n";
        require_close("chi2_small", small_limit, small_target, 0.01);
        require_close("two_point(0)", tp0, tp0_target, 0.01);
    }
}

// ---------------------------------------------------------------------------
// criterion 7: finite-window curve endpoints against the window limits
// ---------------------------------------------------------------------------

void criterion7() {
    const Chain& chain = alpha_chain(2.5);
    const MatrixElements me = truncate(chain.me, 28);
    const double small_limit = chi2_small(me);
    const double large_limit = chi2_large(me);

    const double t_small = 0.01;
    const double ratio_small = chi2_exact(me, t_small) / small_limit;
    const double prefactor = std::pow(1.0 + 2.0 * t_small, 3);
    const double bracket_ratio = ratio_small / prefactor;

    const double ratio_large = chi2_exact(me, 100.0) / large_limit;

    std::cout << "  small-window ratio chi2_exact(0.01)/chi2_small = "
              << ratio_small << "\n";
    std::cout << "  window prefactor (1+2T)^3 at T = 0.01 is " << prefactor
              << "; de-prefactored ratio = " << bracket_ratio << "\n";
    std::cout << "  large-window ratio chi2_exact(100)/chi2_large = "
              << ratio_large << "\n";

    REQUIRE(ratio_small >= 0.95 && ratio_small <= 1.05,
            "chi2_exact(0.01)/chi2_small = "
                << ratio_small << " is outside [0.95, 1.05]; the curve's "
                << "window prefactor (1+2T)^3 = " << prefactor
                << " already exceeds the 1.05 ceiling at T = 0.01 for any "
                << "matrix-element set (de-prefactored ratio here is "
                << bracket_ratio << "), so this bound is not attainable "
                << "at this window size");
    REQUIRE(std::abs(ratio_large - 1.0) <= 0.05,
            "chi2_exact(100)/chi2_large = " << ratio_large
                                            << " deviates from 1 by more "
                                            << "than 5%");
}

// ---------------------------------------------------------------------------
// criterion 8: oscillator path sampler statistics
// ---------------------------------------------------------------------------

void criterion8() {
    const double pi = std::acos(-1.0);
    const GridFunction phi0 = GridFunction::sampled(
        8.0, 1601,
        [pi](double x) { return std::pow(pi, -0.25) * std::exp(-0.5 * x * x); });
    const GridFunction rho = GridFunction::sampled(
        8.0, 1601,
        [pi](double x) { return std::exp(-x * x) / std::sqrt(pi); });
    const GridFunction drift = drift_field(phi0);

    SimulationPlan plan;
    plan.dt = 0.01;
    plan.n_steps = 200;
    plan.n_paths = 100000;
    plan.seed = 20260816ULL;
    plan.windows = {1.0};
    plan.lags = {1.0};
    const PathEnsemble ens = simulate(drift, rho, plan);

    const Chi2Estimate chi2 = estimate_chi2(ens, 1.0);
    const MomentEstimate ac = autocovariance(ens, 1.0);
    const double ac_target = 0.18393972058572117;  // exp(-1)/2

    std::cout << "  chi2(T=1) = " << chi2.value << " +- "
              << chi2.standard_error << " (" << chi2.n_paths << " paths)\n";
    std::cout << "  autocov(lag 1) = " << ac.value << " +- "
              << ac.standard_error << " (target " << ac_target << ")\n";

    REQUIRE(chi2.n_paths == 100000,
            "ensemble carries " << chi2.n_paths << " paths, expected 100000");
    REQUIRE(std::abs(chi2.value) <= 3.0 * chi2.standard_error,
            "chi2(T=1) = " << chi2.value << " is more than 3 SE ("
                           << chi2.standard_error << ") from 0");
    REQUIRE(std::abs(ac.value - ac_target) <= 3.0 * ac.standard_error,
            "autocov(lag 1) = " << ac.value << " is more than 3 SE ("
                                << ac.standard_error << ") from "
                                << ac_target);
}

// ---------------------------------------------------------------------------
// criterion 9: property suites across the built-in families
// ---------------------------------------------------------------------------

void criterion9() {
    // Fractional powers of the characteristic stay positive semidefinite.
    const LevyDensity cauchy = LevyDensity::cauchy_tail(1.0);
    const std::vector<double> probe = {0.0, 0.5, 1.0, 2.0, 3.5, 5.0};
    double worst_eig = 0.0;
    for (int n : {2, 3, 5}) {
        const CharacteristicSamples samples =
            sample_characteristic(cauchy, probe, 1.0 / n);
        const double min_eig = bochner_min_eigenvalue(samples, probe);
        worst_eig = std::min(worst_eig, min_eig);
        REQUIRE(min_eig >= -1e-10, "C^(1/" << n << ") Gram matrix min "
                                           << "eigenvalue " << min_eig
                                           << " is below -1e-10");
    }
    std::cout << "  fractional-power Gram matrices: worst min eigenvalue = "
              << worst_eig << "\n";

    // All outputs are even in the ladder sign convention.
    const MatrixElements me = truncate(alpha_chain(2.5).me, 28);
    const MatrixElements flipped =
        matrix_elements_from(-me.q, me.energies);
    const double flip_dev = std::max(
        {std::abs(chi2_small(me) - chi2_small(flipped)),
         std::abs(chi2_large(me) - chi2_large(flipped)),
         std::abs(chi2_exact(me, 1.0) - chi2_exact(flipped, 1.0))});
    std::cout << "  sign-flip invariance, worst |dev| = " << flip_dev << "\n";
    REQUIRE(flip_dev <= 1e-14,
            "sign flip of the ladder changes an output by " << flip_dev);

    // Two-argument correlator depends on time differences only.
    const double stationarity = stationarity_deviation(
        me, 0.37, {{0.0, 0.3}, {0.2, 1.1}, {-0.4, 0.9}});
    std::cout << "  stationarity deviation = " << stationarity << "\n";
    REQUIRE(stationarity <= 1e-14,
            "time-shift deviation " << stationarity << " exceeds 1e-14");

    // The small-window limit is a centered fourth moment: nonnegative for
    // every built-in family.
    const double h = 0.3;
    const double amp = 30.0 / (h * std::sqrt(std::acos(-1.0)));
    const GridFunction table = GridFunction::sampled(
        4.0, 801, [=](double y) { return amp * std::exp(-(y / h) * (y / h)); });
    const Chain bessel_chain =
        build_chain(LevyDensity::bessel_k1(1.0, 1.0), 12, GridSpec{12.0, 2001});
    const Chain tabulated_chain = build_chain(LevyDensity::tabulated(table),
                                              12, GridSpec{12.0, 2001});
    struct FamilyCase {
        const char* name;
        double value;
    };
    const FamilyCase cases[] = {
        {"harmonic_oscillator", chi2_small(ho_exact(1.0, 30))},
        {"cauchy", chi2_small(cauchy_chain().me)},
        {"bessel_k1", chi2_small(bessel_chain.me)},
        {"alpha", chi2_small(me)},
        {"tabulated", chi2_small(tabulated_chain.me)},
    };
    std::cout << "  chi2_small by family:";
    for (const FamilyCase& c : cases) std::cout << " " << c.name << " = "
                                                << c.value;
    std::cout << "\n";
    for (const FamilyCase& c : cases) {
        REQUIRE(c.value >= -1e-10, "chi2_small for family " << c.name
                                                            << " is " << c.value);
    }

    // Seeded pipeline runs reproduce their reports byte for byte.
    PipelineConfig cfg;
    cfg.model.family = "harmonic_oscillator";
    cfg.model.omega = 1.0;
    cfg.model.analytic = true;
    cfg.grid = GridSpec{8.0, 1201};
    cfg.spectrum.states = 8;
    cfg.spectrum.margin = 2;
    cfg.chi2.t_values = {0.1, 1.0};
    cfg.sampler.enabled = true;
    cfg.sampler.paths = 400;
    cfg.sampler.dt = 0.01;
    cfg.sampler.steps = 150;
    cfg.sampler.windows = {0.5};
    cfg.sampler.lags = {0.5};
    cfg.seed = 987654321ULL;
    cfg.output.directory = "acceptance_out/replay_a";
    run_pipeline(cfg, kAllStages, true);
    cfg.output.directory = "acceptance_out/replay_b";
    run_pipeline(cfg, kAllStages, true);
    const std::string chi2_a =
        read_text_file("acceptance_out/replay_a/chi2.json");
    const std::string chi2_b =
        read_text_file("acceptance_out/replay_b/chi2.json");
    const std::string mc_a = read_text_file("acceptance_out/replay_a/mc.json");
    const std::string mc_b = read_text_file("acceptance_out/replay_b/mc.json");
    std::cout << "  repeated seeded runs: chi2.json "
              << (chi2_a == chi2_b ? "identical" : "DIFFER") << " ("
              << chi2_a.size() << " bytes), mc.json "
              << (mc_a == mc_b ? "identical" : "DIFFER") << " ("
              << mc_a.size() << " bytes)\n";
    REQUIRE(!chi2_a.empty() && chi2_a == chi2_b,
            "chi2.json differs between identically seeded runs");
    REQUIRE(!mc_a.empty() && mc_a == mc_b,
            "mc.json differs between identically seeded runs");
}

// ---------------------------------------------------------------------------
// criterion 10: signed large-window limits across the power-law family
// ---------------------------------------------------------------------------

void criterion10() {
    for (double alpha : {2.0, 2.25, 2.5, 2.75}) {
        const Chain& chain = alpha_chain(alpha);
        const Chi2Report report =
            build_chi2_report(chain.me, 28, 4, {}, 1e-3);
        std::cout << "  alpha = " << alpha << ": chi2_large = "
                  << format_full(report.chi2_large) << " (truncation delta "
                  << report.chi2_large_delta << ", "
                  << (report.chi2_large_converged ? "converged"
                                                  : "not converged")
                  << ")\n";
        std::cout << "           chi2_small = "
                  << format_full(report.chi2_small) << " (truncation delta "
                  << report.chi2_small_delta << ", "
                  << (report.chi2_small_converged ? "converged"
                                                  : "not converged")
                  << ")\n";
        if (!report.leading_terms.empty()) {
            std::cout << "           leading channels:";
            const std::size_t shown =
                std::min<std::size_t>(3, report.leading_terms.size());
            for (std::size_t i = 0; i < shown; ++i) {
                const Chi2Term& term = report.leading_terms[i];
                std::cout << " (" << term.k << "," << term.l << "," << term.m
                          << ") -> " << term.contribution;
            }
            std::cout << "\n";
        }
        REQUIRE(std::isfinite(report.chi2_large),
                "chi2_large for alpha = " << alpha << " is not finite");
        REQUIRE(std::isfinite(report.chi2_large_delta),
                "truncation delta for alpha = " << alpha << " is not finite");
    }
}

}  // namespace

int main() {
    std::cout << std::setprecision(12);
    std::cout << "levylab acceptance gate\n";
    run_criterion(1, "oscillator window limits vanish", 1.0, criterion1);
    run_criterion(2, "oscillator exact curve vanishes", 1.0, criterion2);
    run_criterion(3, "numeric eigensolver accuracy", 5.0, criterion3);
    run_criterion(4, "heavy-tail reconstruction chain", 10.0, criterion4);
    run_criterion(5, "exponential-tail family closed forms", 10.0, criterion5);
    run_criterion(6, "power-law moment identities", 120.0, criterion6);
    run_criterion(7, "window curve endpoint ratios", 60.0, criterion7);
    run_criterion(8, "oscillator sampler statistics", 300.0, criterion8);
    run_criterion(9, "family property suites", 0.0, criterion9);
    run_criterion(10, "power-law large-window survey", 0.0, criterion10);
    std::cout << (10 - g_failures) << "/10 criteria passed";
    if (g_failures > 0) std::cout << ", " << g_failures << " failed";
    std::cout << "\n";
    return g_failures;
}
