#include "levylab/levy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "levylab/quadrature.hpp"
#include "levylab/special.hpp"

namespace levylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.5772156649015328606;

// Lower incomplete gamma by the all-positive Kummer series,
// gamma(s, x) = x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n)). Stable for
// every x >= 0 because no cancellation occurs.
double lower_gamma(double s, double x) {
    if (x <= 0.0) return 0.0;
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (s + n);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return std::pow(x, s) * std::exp(-x) * sum;
}

// S(Z, k) = Int_0^Z z^{2k-1} K1(z) dz by termwise integration of the
// ascending series of K1. Accurate for Z up to about 2; larger upper limits
// are split off and integrated numerically by the caller.
double bessel_small_integral(double Z, int k) {
    const double lg = std::log(0.5 * Z);
    const double q = 0.25 * Z * Z;

    const double lead = std::pow(Z, 2 * k - 1) / (2 * k - 1);
    double log_piece = 0.0;
    double corr_piece = 0.0;

    double term = 1.0;                          // (Z^2/4)^j / (j! (j+1)!)
    double psi_sum = -2.0 * kEulerGamma + 1.0;  // psi(j+1) + psi(j+2)
    const double zpow = std::pow(Z, 2 * k + 1); // Z^{2k + 1}; term carries Z^{2j}
    for (int j = 0; j < 80; ++j) {
        const double m = 2.0 * k + 2.0 * j + 1.0;
        const double db = 0.5 * term * zpow * (lg / m - 1.0 / (m * m));
        const double dc = 0.25 * psi_sum * term * zpow / m;
        log_piece += db;
        corr_piece += dc;
        if (std::abs(db) + std::abs(dc) < 1e-18 * (lead + std::abs(log_piece) + corr_piece))
            break;
        term *= q / ((j + 1.0) * (j + 2.0));
        psi_sum += 1.0 / (j + 1.0) + 1.0 / (j + 2.0);
    }
    return lead + log_piece - corr_piece;
}

} // namespace

// ---- construction ---------------------------------------------------------

LevyDensity LevyDensity::cauchy_tail(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::domain_error("cauchy_tail: a must be positive and finite");
    return LevyDensity(CauchyTailFamily{a});
}

LevyDensity LevyDensity::bessel_k1(double b, double rho) {
    if (!(b > 0.0) || !std::isfinite(b) || !(rho > 0.0) || !std::isfinite(rho))
        throw std::domain_error("bessel_k1: b and rho must be positive and finite");
    return LevyDensity(BesselK1Family{b, rho});
}

LevyDensity LevyDensity::alpha_family(double alpha) {
    if (!(alpha >= 2.0 && alpha < 3.0))
        throw std::domain_error("alpha_family: alpha must lie in [2, 3)");
    return LevyDensity(AlphaFamilyDensity{alpha});
}

LevyDensity LevyDensity::tabulated(const GridFunction& sigma) {
    const double max_abs = sigma.values().abs().maxCoeff();
    if (!(max_abs > 0.0)) throw std::domain_error("tabulated: table is identically zero");
    if (sigma.evenness_defect() > 1e-12 * max_abs)
        throw std::domain_error("tabulated: table is not even within 1e-12 of its maximum");
    if (sigma.values().minCoeff() < 0.0)
        throw std::domain_error("tabulated: table has negative entries");

    GridFunction sym = sigma.symmetrized();
    const int c = sym.center_index();
    const int half = sym.size() - c;
    Eigen::ArrayXd xs(half), ys(half);
    for (int i = 0; i < half; ++i) {
        xs[i] = sym.x(c + i);
        ys[i] = sym[c + i];
    }
    MonotoneCubic interp(std::move(xs), std::move(ys));
    return LevyDensity(TabulatedFamily{std::move(sym), std::move(interp)});
}

// ---- pointwise evaluation -------------------------------------------------

double LevyDensity::operator()(double y) const {
    return std::visit(
        [y](const auto& fam) -> double {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, CauchyTailFamily>) {
                if (y == 0.0) throw std::domain_error("sigma: singular at y = 0");
                return fam.a / (kPi * y * y);
            } else if constexpr (std::is_same_v<F, BesselK1Family>) {
                if (y == 0.0) throw std::domain_error("sigma: singular at y = 0");
                const double ay = std::abs(y);
                return fam.b * fam.rho * levylab::bessel_k1(fam.rho * ay) / (kPi * ay);
            } else if constexpr (std::is_same_v<F, AlphaFamilyDensity>) {
                if (y == 0.0) throw std::domain_error("sigma: singular at y = 0");
                const double ay = std::abs(y);
                return std::exp(-y * y) / (kPi * std::pow(ay, fam.alpha));
            } else {
                const double ay = std::abs(y);
                if (ay > fam.table.x_max()) return 0.0;
                return fam.interp(ay);
            }
        },
        family_);
}

// ---- small-y moments ------------------------------------------------------

double LevyDensity::small_moment(int k, double eps) const {
    if (k < 1) throw std::domain_error("small_moment: k must be at least 1");
    if (!(eps > 0.0)) throw std::domain_error("small_moment: eps must be positive");

    if (const auto* f = std::get_if<CauchyTailFamily>(&family_)) {
        return (f->a / kPi) * std::pow(eps, 2 * k - 1) / (2 * k - 1);
    }
    if (const auto* f = std::get_if<AlphaFamilyDensity>(&family_)) {
        // Substituting u = y^2 turns the integral into a lower incomplete
        // gamma at argument eps^2.
        const double s = k - 0.5 * (f->alpha - 1.0);
        return lower_gamma(s, eps * eps) / (2.0 * kPi);
    }
    if (const auto* f = std::get_if<BesselK1Family>(&family_)) {
        const double Z = f->rho * eps;
        const double zcap = 1.5;
        const double scale = (f->b / kPi) * std::pow(f->rho, 1 - 2 * k);
        if (Z <= zcap) return scale * bessel_small_integral(Z, k);
        const double y_split = zcap / f->rho;
        const double series = scale * bessel_small_integral(zcap, k);
        auto g = [this, k](double y) { return std::pow(y, 2 * k) * (*this)(y); };
        return series + integrate(g, y_split, eps, 1e-14, 1e-12).value;
    }
    const auto& f = std::get<TabulatedFamily>(family_);
    const double upper = std::min(eps, f.table.x_max());
    if (upper <= 0.0) return 0.0;
    auto g = [&f, k](double y) { return std::pow(y, 2 * k) * f.interp(y); };
    return integrate(g, 0.0, upper, 1e-14, 1e-12).value;
}

// ---- tail handling --------------------------------------------------------

double LevyDensity::tail_cutoff(double s, double tol) const {
    if (!(tol > 0.0)) throw std::domain_error("tail_cutoff: tol must be positive");
    if (const auto* f = std::get_if<TabulatedFamily>(&family_)) return f->table.x_max();
    if (!(s > 0.0)) throw std::domain_error("tail_cutoff: s must be positive");

    if (const auto* f = std::get_if<CauchyTailFamily>(&family_)) {
        // Remainder of the integration-by-parts expansion is below
        // (a/pi) 6 / (s^3 Y^4); the floor keeps s Y large enough for the
        // expansion to be asymptotic.
        const double Y = std::pow(6.0 * f->a / (kPi * s * s * s * tol), 0.25);
        return std::max({Y, 10.0 / s, 1.0});
    }
    if (const auto* f = std::get_if<BesselK1Family>(&family_)) {
        const double pref = 2.0 * f->b / kPi * std::sqrt(kPi / (2.0 * f->rho));
        double Y = 8.0 / f->rho;
        for (int i = 0; i < 200; ++i) {
            const double bound = pref * std::exp(-f->rho * Y) / std::pow(Y, 1.5);
            if (bound < tol) break;
            Y *= 2.0;
        }
        return Y;
    }
    const auto& f = std::get<AlphaFamilyDensity>(family_);
    double Y = 6.5;
    while (std::exp(-Y * Y) / (kPi * std::pow(Y, f.alpha + 1.0)) >= tol && Y < 40.0) Y += 0.5;
    return Y;
}

double LevyDensity::tail_estimate(double s, double Y) const {
    if (!(Y > 0.0)) throw std::domain_error("tail_estimate: Y must be positive");
    return std::visit(
        [s, Y](const auto& fam) -> double {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, CauchyTailFamily>) {
                // Integration by parts of Int_Y^inf (1 - cos(sy)) a/(pi y^2) dy,
                // truncated after the 1/(s^3 Y^4) term.
                const double sy = s * Y;
                return (fam.a / kPi) *
                       (1.0 / Y + std::sin(sy) / (s * Y * Y) -
                        2.0 * std::cos(sy) / (s * s * Y * Y * Y) -
                        6.0 * std::sin(sy) / (s * s * s * Y * Y * Y * Y));
            } else if constexpr (std::is_same_v<F, BesselK1Family>) {
                // Leading asymptotics of the monotone part Int_Y^inf sigma.
                return (fam.b / kPi) * std::sqrt(kPi / (2.0 * fam.rho)) *
                       std::exp(-fam.rho * Y) / (fam.rho * std::pow(Y, 1.5));
            } else if constexpr (std::is_same_v<F, AlphaFamilyDensity>) {
                return std::exp(-Y * Y) / (2.0 * kPi * std::pow(Y, fam.alpha + 1.0));
            } else {
                return 0.0;
            }
        },
        family_);
}

bool LevyDensity::moment_diverges(int p) const {
    if (p < 1) throw std::domain_error("moment_diverges: p must be at least 1");
    return std::holds_alternative<CauchyTailFamily>(family_);
}

// ---- naming ---------------------------------------------------------------

std::string LevyDensity::family_name() const {
    return std::visit(
        [](const auto& fam) -> std::string {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, CauchyTailFamily>) return "cauchy";
            else if constexpr (std::is_same_v<F, BesselK1Family>) return "bessel_k1";
            else if constexpr (std::is_same_v<F, AlphaFamilyDensity>) return "alpha";
            else return "tabulated";
        },
        family_);
}

std::vector<std::pair<std::string, double>> LevyDensity::parameters() const {
    return std::visit(
        [](const auto& fam) -> std::vector<std::pair<std::string, double>> {
            using F = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<F, CauchyTailFamily>) {
                return {{"a", fam.a}};
            } else if constexpr (std::is_same_v<F, BesselK1Family>) {
                return {{"b", fam.b}, {"rho", fam.rho}};
            } else if constexpr (std::is_same_v<F, AlphaFamilyDensity>) {
                return {{"alpha", fam.alpha}};
            } else {
                return {{"extent", fam.table.x_max()},
                        {"points", static_cast<double>(fam.table.size())}};
            }
        },
        family_);
}

// ---- exponent and characteristic -------------------------------------------

double levy_exponent(const LevyDensity& sigma, double s) {
    if (s == 0.0) return 0.0;
    const double as = std::abs(s);

    // Split point keeps s*y <= 1e-4 on the series piece, so three terms of
    // the 1 - cos expansion carry the full double precision.
    const double eps = std::min(1e-4 / as, 0.5);

    CompensatedSum small;
    double s_pow = as * as;
    const double inv_fact[3] = {1.0 / 2.0, 1.0 / 24.0, 1.0 / 720.0};
    double sign = 1.0;
    for (int k = 1; k <= 3; ++k) {
        small.add(sign * s_pow * inv_fact[k - 1] * sigma.small_moment(k, eps));
        s_pow *= as * as;
        sign = -sign;
    }

    const double tail_tol = 1e-10;
    const double Y = sigma.tail_cutoff(as, tail_tol);

    double mid = 0.0;
    double tail = 0.0;
    if (Y > eps) {
        auto f = [&sigma, as](double y) {
            const double h = std::sin(0.5 * as * y);
            return 2.0 * h * h * sigma(y);
        };
        mid = integrate(f, eps, Y, 1e-13, 1e-11).value;
        tail = sigma.tail_estimate(as, Y);
    }
    return 2.0 * (small.value() + mid + tail);
}

double characteristic(const LevyDensity& sigma, double s, double r) {
    if (!(r > 0.0)) throw std::domain_error("characteristic: power r must be positive");
    return std::exp(-r * levy_exponent(sigma, s));
}

// ---- full moments -----------------------------------------------------------

MomentResult sigma_moment(const LevyDensity& sigma, int p) {
    if (p < 1) throw std::domain_error("sigma_moment: p must be at least 1");
    if (sigma.moment_diverges(p))
        return {std::numeric_limits<double>::infinity(), true};

    if (sigma.is_tabulated()) {
        const auto& fam = sigma.tabulated_family();
        const double extent = fam.table.x_max();
        auto g = [&fam, p](double y) { return std::pow(y, 2 * p) * fam.interp(y); };
        const double full = 2.0 * integrate(g, 0.0, extent, 1e-13, 1e-11).value;
        const double half = 2.0 * integrate(g, 0.0, 0.5 * extent, 1e-13, 1e-11).value;
        // A moment still growing by 10% between the half and full extents is
        // truncation-dominated; report the partial value but flag it.
        const bool unstable =
            std::abs(full - half) > 0.10 * std::max(std::abs(full), 1e-300);
        return {full, unstable};
    }

    // Analytic families: closed forms via the gamma function.
    MomentResult out;
    const auto params = sigma.parameters();
    const std::string name = sigma.family_name();
    if (name == "alpha") {
        const double alpha = params[0].second;
        out.value = gamma_fn(p - 0.5 * (alpha - 1.0)) / kPi;
    } else if (name == "bessel_k1") {
        const double b = params[0].second;
        const double rho = params[1].second;
        out.value = 2.0 * (b / kPi) * std::pow(rho, 1.0 - 2.0 * p) *
                    std::pow(2.0, 2 * p - 2) * gamma_fn(p - 0.5) * gamma_fn(p + 0.5);
    } else {
        throw std::logic_error("sigma_moment: unhandled family " + name);
    }
    return out;
}

// ---- sampled characteristic and the positivity probe ------------------------

double CharacteristicSamples::value_at(double s, double snap) const {
    const double as = std::abs(s);
    const double* begin = s_values.data();
    const double* end = begin + s_values.size();
    const double* it = std::lower_bound(begin, end, as);
    const double* best = nullptr;
    double best_d = snap;
    auto consider = [&](const double* p) {
        if (p >= begin && p < end && std::abs(*p - as) <= best_d) {
            best_d = std::abs(*p - as);
            best = p;
        }
    };
    consider(it);
    consider(it - 1);
    if (best == nullptr)
        throw std::domain_error("characteristic sample lookup missed the abscissa");
    return c_values[best - begin];
}

CharacteristicSamples sample_characteristic(const LevyDensity& sigma,
                                            const std::vector<double>& probe, double r) {
    if (probe.empty()) throw std::domain_error("sample_characteristic: empty probe set");
    std::vector<double> lags;
    lags.reserve(probe.size() * probe.size());
    for (double pi_ : probe)
        for (double pj : probe) lags.push_back(std::abs(pi_ - pj));
    std::sort(lags.begin(), lags.end());
    std::vector<double> unique_lags;
    for (double v : lags) {
        if (unique_lags.empty() || v - unique_lags.back() > 1e-12 * std::max(1.0, v))
            unique_lags.push_back(v);
    }

    CharacteristicSamples out;
    out.power = r;
    out.s_values = Eigen::Map<const Eigen::ArrayXd>(unique_lags.data(),
                                                    static_cast<int>(unique_lags.size()));
    out.c_values.resize(out.s_values.size());
    for (int i = 0; i < out.s_values.size(); ++i)
        out.c_values[i] = characteristic(sigma, out.s_values[i], r);
    return out;
}

double bochner_min_eigenvalue(const CharacteristicSamples& c, const std::vector<double>& probe) {
    const int n = static_cast<int>(probe.size());
    if (n == 0) throw std::domain_error("bochner_min_eigenvalue: empty probe set");
    if (n > 16) throw std::domain_error("bochner_min_eigenvalue: probe set capped at 16 points");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = c.value_at(probe[i] - probe[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace levylab
