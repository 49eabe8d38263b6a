#include "levylab/schrodinger.hpp"

#include <cmath>
#include <cstdint>

#include "levylab/errors.hpp"
#include "levylab/interp.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

namespace {

// Deterministic start vector for inverse iteration; splitmix64 scrambling of
// the index guarantees generic overlap with every eigenvector.
double scrambled_unit(std::uint64_t i) {
    std::uint64_t z = i + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return (z >> 11) * 0x1.0p-53 - 0.5;
}

// Number of eigenvalues of the (d, e) tridiagonal strictly below lambda,
// by the Sturm sequence of leading principal minors.
int count_below(const Eigen::ArrayXd& d, double e, double lambda) {
    const int n = static_cast<int>(d.size());
    int count = 0;
    double q = d[0] - lambda;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        if (q == 0.0) q = -1e-300;
        q = d[i] - lambda - e * e / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// Smallest lambda with count_below(lambda) >= k + 1, bisected to rounding.
double bisect_eigenvalue(const Eigen::ArrayXd& d, double e, int k, double lo, double hi) {
    double a = lo, b = hi;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (count_below(d, e, mid) >= k + 1) b = mid;
        else a = mid;
    }
    return b;
}

// Solves (T - lambda I) x = r for the (d, e) tridiagonal by Gaussian
// elimination with partial pivoting; the swap fill-in occupies one extra
// superdiagonal. Near-singular pivots are inflated to keep inverse
// iteration finite.
Eigen::VectorXd solve_shifted(const Eigen::ArrayXd& d, double e, double lambda,
                              Eigen::VectorXd r) {
    const int n = static_cast<int>(d.size());
    Eigen::ArrayXd m(n), u(n), w(n);
    for (int i = 0; i < n; ++i) {
        m[i] = d[i] - lambda;
        u[i] = (i + 1 < n) ? e : 0.0;
        w[i] = 0.0;
    }
    const double tiny = 1e-280 * (1.0 + d.abs().maxCoeff());
    for (int i = 0; i + 1 < n; ++i) {
        double lower0 = e, lower1 = m[i + 1], lower2 = u[i + 1];
        if (std::abs(m[i]) < std::abs(lower0)) {
            std::swap(m[i], lower0);
            std::swap(u[i], lower1);
            std::swap(w[i], lower2);
            std::swap(r[i], r[i + 1]);
        }
        if (std::abs(m[i]) < tiny) m[i] = (m[i] < 0.0) ? -tiny : tiny;
        const double f = lower0 / m[i];
        m[i + 1] = lower1 - f * u[i];
        u[i + 1] = lower2 - f * w[i];
        w[i + 1] = 0.0;
        r[i + 1] -= f * r[i];
    }
    if (std::abs(m[n - 1]) < tiny) m[n - 1] = (m[n - 1] < 0.0) ? -tiny : tiny;

    Eigen::VectorXd x(n);
    x[n - 1] = r[n - 1] / m[n - 1];
    if (n >= 2) x[n - 2] = (r[n - 2] - u[n - 2] * x[n - 1]) / m[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (r[i] - u[i] * x[i + 1] - w[i] * x[i + 2]) / m[i];
    return x;
}

double trapezoid_norm2(const Eigen::VectorXd& v, double dx) {
    CompensatedSum acc;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc.add(weight * v[i] * v[i]);
    }
    return acc.value() * dx;
}

} // namespace

GridFunction Spectrum::state(int k) const {
    return GridFunction(dx, states.col(k).array());
}

Spectrum solve(const GridFunction& V, int K) {
    const int n = V.size();
    if (K < 1) throw SpectrumError("solve: need at least one state");
    if (K > n / 4)
        throw SpectrumError("solve: requested " + std::to_string(K) + " states but the grid has "
                            "only " + std::to_string(n) + " points (limit n/4)");
    if (!V.is_even(1e-9 * (1.0 + V.values().abs().maxCoeff())))
        throw SpectrumError("solve: potential is not even on its grid");

    const double dx = V.dx();
    const double inv2 = 1.0 / (dx * dx);
    const double e = -0.5 * inv2;
    Eigen::ArrayXd d = V.values() + inv2;

    const double lo = d.minCoeff() - 2.0 * std::abs(e);
    const double hi = d.maxCoeff() + 2.0 * std::abs(e);

    Eigen::VectorXd raw(K);
    for (int k = 0; k < K; ++k) raw[k] = bisect_eigenvalue(d, e, k, lo, hi);

    for (int k = 0; k + 1 < K; ++k) {
        if (raw[k + 1] - raw[k] < 1e-10 * (1.0 + std::abs(raw[k + 1])))
            throw SpectrumError("solve: near-degenerate levels " + std::to_string(k) + " and " +
                                std::to_string(k + 1) + "; the double-well limit is outside "
                                "this solver's contract");
    }

    Spectrum spec;
    spec.dx = dx;
    spec.states.resize(n, K);
    spec.parity.resize(K);
    spec.energies.resize(K);

    for (int k = 0; k < K; ++k) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = scrambled_unit(static_cast<std::uint64_t>(i));
        v /= v.norm();
        for (int iter = 0; iter < 3; ++iter) {
            v = solve_shifted(d, e, raw[k], v);
            v /= v.norm();
        }

        // Rayleigh polish of the bisected eigenvalue.
        double num = 0.0;
        for (int i = 0; i < n; ++i) {
            double tv = d[i] * v[i];
            if (i > 0) tv += e * v[i - 1];
            if (i + 1 < n) tv += e * v[i + 1];
            num += v[i] * tv;
        }
        raw[k] = num;

        // Parity detection against the expected (-1)^k alternation.
        const int expected = (k % 2 == 0) ? 1 : -1;
        double overlap = 0.0;
        for (int i = 0; i < n; ++i) overlap += v[i] * v[n - 1 - i];
        if (std::abs(overlap - expected) > 0.5)
            throw SpectrumError("solve: state " + std::to_string(k) +
                                " broke the even/odd alternation");
        Eigen::VectorXd projected(n);
        for (int i = 0; i < n; ++i) projected[i] = 0.5 * (v[i] + expected * v[n - 1 - i]);
        v = projected;

        v /= std::sqrt(trapezoid_norm2(v, dx));

        // Ladder-positive sign convention: phi_0 positive at the centre, then
        // each sign chosen so <phi_{k-1}| x |phi_k> >= 0. Makes the position
        // matrix of the oscillator come out with its conventional positive
        // sub-diagonal.
        if (k == 0) {
            if (v[(n - 1) / 2] < 0.0) v = -v;
        } else {
            double r = 0.0;
            for (int i = 0; i < n; ++i) {
                const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                r += weight * spec.states(i, k - 1) * ((i - (n - 1) / 2) * dx) * v[i];
            }
            if (r < 0.0) v = -v;
        }

        spec.states.col(k) = v;
        spec.parity[k] = expected;
    }

    spec.e0_raw = raw[0];
    for (int k = 0; k < K; ++k) spec.energies[k] = raw[k] - raw[0];
    return spec;
}

MatrixElements matrix_elements(const Spectrum& spec) {
    const int K = spec.n_states();
    const int n = spec.n_points();
    const double dx = spec.dx;

    MatrixElements me;
    me.energies = spec.energies;
    me.q.resize(K, K);
    for (int k = 0; k < K; ++k) {
        for (int l = k; l < K; ++l) {
            CompensatedSum acc;
            for (int i = 0; i < n; ++i) {
                const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                acc.add(weight * spec.states(i, k) * spec.x(i) * spec.states(i, l));
            }
            me.q(k, l) = acc.value() * dx;
            me.q(l, k) = me.q(k, l);
        }
    }
    return me;
}

MatrixElements matrix_elements_from(Eigen::MatrixXd q, Eigen::VectorXd energies) {
    if (q.rows() != q.cols()) throw std::invalid_argument("matrix_elements_from: q not square");
    if (q.rows() != energies.size())
        throw std::invalid_argument("matrix_elements_from: size mismatch");
    MatrixElements me;
    me.q = std::move(q);
    me.energies = std::move(energies);
    return me;
}

MatrixElements truncate(const MatrixElements& me, int K) {
    if (K < 1 || K > me.q.rows()) throw std::invalid_argument("truncate: bad state count");
    MatrixElements out;
    out.q = me.q.topLeftCorner(K, K);
    out.energies = me.energies.head(K);
    return out;
}

bool ConvergenceReport::any_flagged() const {
    for (const auto& level : levels)
        for (bool f : level.flagged)
            if (f) return true;
    return false;
}

ConvergenceReport convergence_sweep(const GridFunction& V, int K, int refinement_levels,
                                    double tolerance) {
    ConvergenceReport report;
    report.tolerance = tolerance;

    GridFunction current = V;
    Eigen::VectorXd coarse = solve(current, K).energies;

    for (int level = 0; level < refinement_levels; ++level) {
        const int n_fine = 2 * current.size() - 1;

        Eigen::ArrayXd xs(current.size()), ys(current.size());
        for (int i = 0; i < current.size(); ++i) {
            xs[i] = current.x(i);
            ys[i] = current[i];
        }
        MonotoneCubic interp(xs, ys);
        GridFunction fine =
            GridFunction::sampled(current.half_width(), n_fine, [&](double x) { return interp(x); });
        fine = fine.symmetrized();

        Eigen::VectorXd refined = solve(fine, K).energies;

        ConvergenceReport::Level entry;
        entry.points = n_fine;
        entry.energies = refined;
        entry.estimated_rel_error.resize(K);
        entry.flagged.resize(K);
        for (int k = 0; k < K; ++k) {
            const double est = std::abs(coarse[k] - refined[k]) / 3.0;
            entry.estimated_rel_error[k] = est / std::max(std::abs(refined[k]), 1e-12);
            entry.flagged[k] = entry.estimated_rel_error[k] > tolerance;
        }
        report.levels.push_back(std::move(entry));

        current = fine;
        coarse = refined;
    }
    return report;
}

} // namespace levylab
