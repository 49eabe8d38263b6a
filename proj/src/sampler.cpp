#include "levylab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace levylab {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64. Starting states must not sit on the increment's own Weyl
// lattice or the streams become shifted copies of each other; path_stream
// below scrambles the path index off that lattice first.
struct SplitMix {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        return mix64(state);
    }

    // Uniform on (0, 1]; never zero, so the Box-Muller log is safe.
    double uniform_pos() { return ((next() >> 11) + 1) * 0x1.0p-53; }
};

// Hand-rolled Box-Muller keeps the stream identical across standard
// libraries; std::normal_distribution is not portable bit-for-bit.
struct Gaussian {
    SplitMix rng;
    bool has_spare = false;
    double spare = 0.0;

    explicit Gaussian(std::uint64_t seed) : rng{seed} {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double r = std::sqrt(-2.0 * std::log(rng.uniform_pos()));
        const double theta = 2.0 * std::numbers::pi * rng.uniform_pos();
        spare = r * std::sin(theta);
        has_spare = true;
        return r * std::cos(theta);
    }
};

// Piecewise-linear inverse CDF built on the density grid.
class StationaryDraw {
public:
    explicit StationaryDraw(const GridFunction& rho) : rho_(&rho), cdf_(rho.size()) {
        cdf_[0] = 0.0;
        for (int i = 1; i < rho.size(); ++i) {
            const double cell = 0.5 * (std::max(rho[i - 1], 0.0) + std::max(rho[i], 0.0));
            cdf_[i] = cdf_[i - 1] + cell * rho.dx();
        }
        const double total = cdf_[rho.size() - 1];
        if (!(total > 0.0)) throw std::domain_error("simulate: density has no mass");
        cdf_ /= total;
    }

    double operator()(double u) const {
        const int n = static_cast<int>(cdf_.size());
        int lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (cdf_[mid] <= u) lo = mid;
            else hi = mid;
        }
        const double span = cdf_[hi] - cdf_[lo];
        const double frac = (span > 0.0) ? (u - cdf_[lo]) / span : 0.5;
        return rho_->x(lo) + frac * rho_->dx();
    }

private:
    const GridFunction* rho_;
    Eigen::ArrayXd cdf_;
};

int commensurate_steps(double duration, double dt, const char* what) {
    const int steps = static_cast<int>(std::llround(duration / dt));
    if (std::abs(steps * dt - duration) > 1e-6 * std::max(1.0, duration))
        throw std::domain_error(std::string("simulate: ") + what +
                                " is not commensurate with dt");
    return steps;
}

} // namespace

GridFunction drift_field(const GridFunction& phi0) {
    if (!(phi0.values().minCoeff() > 0.0))
        throw std::domain_error("drift_field: ground state must be strictly positive here");
    const int n = phi0.size();
    const double dx = phi0.dx();
    GridFunction b(dx, Eigen::ArrayXd::Zero(n));
    for (int i = 1; i + 1 < n; ++i)
        b[i] = (phi0[i + 1] - phi0[i - 1]) / (2.0 * dx * phi0[i]);
    b[0] = (phi0[1] - phi0[0]) / (dx * phi0[0]);
    b[n - 1] = (phi0[n - 1] - phi0[n - 2]) / (dx * phi0[n - 1]);
    return b;
}

PathEnsemble simulate(const GridFunction& drift, const GridFunction& rho,
                      const SimulationPlan& plan) {
    if (plan.n_paths < 1) throw std::domain_error("simulate: need at least one path");
    if (!(plan.dt > 0.0)) throw std::domain_error("simulate: dt must be positive");
    if (plan.n_steps < 0) throw std::domain_error("simulate: negative step count");

    const double max_drift = drift.values().abs().maxCoeff();
    if (plan.dt * max_drift >= 0.5)
        throw std::domain_error("simulate: dt * max|drift| = " +
                                std::to_string(plan.dt * max_drift) +
                                " makes the Euler step stiff (limit 0.5)");

    const int n_windows = static_cast<int>(plan.windows.size());
    std::vector<int> window_steps(n_windows);
    for (int w = 0; w < n_windows; ++w) {
        if (!(plan.windows[w] > 0.0))
            throw std::domain_error("simulate: window half-width must be positive");
        window_steps[w] = commensurate_steps(2.0 * plan.windows[w], plan.dt, "window");
        if (window_steps[w] > plan.n_steps)
            throw std::domain_error("simulate: window 2T exceeds the simulated span");
    }

    const int n_lags = static_cast<int>(plan.lags.size());
    std::vector<int> lag_steps(n_lags);
    int max_lag = 0;
    for (int l = 0; l < n_lags; ++l) {
        if (plan.lags[l] < 0.0) throw std::domain_error("simulate: negative lag");
        lag_steps[l] = commensurate_steps(plan.lags[l], plan.dt, "lag");
        if (lag_steps[l] > plan.n_steps)
            throw std::domain_error("simulate: lag exceeds the simulated span");
        max_lag = std::max(max_lag, lag_steps[l]);
    }

    StationaryDraw draw(rho);

    PathEnsemble out;
    out.plan = plan;
    out.wall_lo = drift.x_min();
    out.wall_hi = drift.x_max();
    out.window_integrals.resize(plan.n_paths, n_windows);
    out.lag_products.resize(plan.n_paths, n_lags);
    out.path_time_averages.resize(plan.n_paths);
    if (plan.keep_paths) out.paths.emplace(plan.n_paths, plan.n_steps + 1);

    const double sqrt_dt = std::sqrt(plan.dt);
    std::vector<double> ring(static_cast<std::size_t>(max_lag) + 1, 0.0);
    std::vector<double> lag_sums(n_lags);
    std::vector<double> window_sums(n_windows);

    for (int p = 0; p < plan.n_paths; ++p) {
        // Counter construction: path p's stream depends only on (seed, p),
        // never on how paths are batched or ordered.
        const std::uint64_t path_stream =
            mix64(mix64(plan.seed) + static_cast<std::uint64_t>(p + 1) * 0xd1342543de82ef95ULL);
        Gaussian gauss(path_stream);

        double x = draw(gauss.rng.uniform_pos());
        // A draw from a density wider than the drift grid starts inside the walls.
        for (int guard = 0; (x < out.wall_lo || x > out.wall_hi) && guard < 100; ++guard) {
            if (x < out.wall_lo) x = 2.0 * out.wall_lo - x;
            if (x > out.wall_hi) x = 2.0 * out.wall_hi - x;
        }
        x = std::min(std::max(x, out.wall_lo), out.wall_hi);

        std::fill(lag_sums.begin(), lag_sums.end(), 0.0);
        std::fill(window_sums.begin(), window_sums.end(), 0.0);
        double position_sum = 0.0;

        for (int step = 0; step <= plan.n_steps; ++step) {
            if (max_lag >= 0) ring[step % (max_lag + 1)] = x;
            for (int l = 0; l < n_lags; ++l)
                if (step >= lag_steps[l])
                    lag_sums[l] += ring[(step - lag_steps[l]) % (max_lag + 1)] * x;
            for (int w = 0; w < n_windows; ++w)
                if (step <= window_steps[w]) {
                    const double weight = (step == 0 || step == window_steps[w]) ? 0.5 : 1.0;
                    window_sums[w] += weight * x;
                }
            position_sum += x;
            if (plan.keep_paths) (*out.paths)(p, step) = x;

            if (step == plan.n_steps) break;
            x += drift.interpolate(x) * plan.dt + sqrt_dt * gauss.next();
            for (int guard = 0; (x < out.wall_lo || x > out.wall_hi) && guard < 100; ++guard) {
                if (x < out.wall_lo) x = 2.0 * out.wall_lo - x;
                if (x > out.wall_hi) x = 2.0 * out.wall_hi - x;
            }
            x = std::min(std::max(x, out.wall_lo), out.wall_hi);
        }

        for (int w = 0; w < n_windows; ++w)
            out.window_integrals(p, w) = window_sums[w] * plan.dt;
        for (int l = 0; l < n_lags; ++l)
            out.lag_products(p, l) = lag_sums[l] / (plan.n_steps - lag_steps[l] + 1);
        out.path_time_averages[p] = position_sum / (plan.n_steps + 1);
    }
    return out;
}

Chi2Estimate estimate_chi2(const PathEnsemble& ensemble, double T) {
    const int n = static_cast<int>(ensemble.window_integrals.rows());
    if (n < 100) throw std::domain_error("estimate_chi2: need at least 100 paths");

    int col = -1;
    for (int w = 0; w < static_cast<int>(ensemble.plan.windows.size()); ++w)
        if (std::abs(ensemble.plan.windows[w] - T) <= 1e-12 * std::max(1.0, T)) col = w;
    if (col < 0) throw std::domain_error("estimate_chi2: window T was not simulated");

    const double z = 2.0 * T;
    const double pref = (1.0 + z) * (1.0 + z) * (1.0 + z) / (z * z * z * z);

    double s2 = 0.0, s4 = 0.0;
    for (int p = 0; p < n; ++p) {
        const double w = ensemble.window_integrals(p, col);
        s2 += w * w;
        s4 += w * w * w * w;
    }
    const double m2 = s2 / n;
    const double m4 = s4 / n;

    Chi2Estimate out;
    out.T = T;
    out.n_paths = n;
    out.value = pref * (m4 - 3.0 * m2 * m2);

    // Leave-one-out jackknife from the two power sums.
    double mean_theta = 0.0;
    for (int p = 0; p < n; ++p) {
        const double w = ensemble.window_integrals(p, col);
        const double m2i = (s2 - w * w) / (n - 1);
        const double m4i = (s4 - w * w * w * w) / (n - 1);
        mean_theta += pref * (m4i - 3.0 * m2i * m2i);
    }
    mean_theta /= n;
    double var = 0.0;
    for (int p = 0; p < n; ++p) {
        const double w = ensemble.window_integrals(p, col);
        const double m2i = (s2 - w * w) / (n - 1);
        const double m4i = (s4 - w * w * w * w) / (n - 1);
        const double d = pref * (m4i - 3.0 * m2i * m2i) - mean_theta;
        var += d * d;
    }
    out.standard_error = std::sqrt(var * (n - 1) / n);
    return out;
}

namespace {

MomentEstimate column_estimate(const Eigen::VectorXd& values) {
    const int n = static_cast<int>(values.size());
    MomentEstimate out;
    out.value = values.mean();
    if (n > 1) {
        const double var = (values.array() - out.value).square().sum() / (n - 1);
        out.standard_error = std::sqrt(var / n);
    }
    return out;
}

} // namespace

MomentEstimate autocovariance(const PathEnsemble& ensemble, double lag) {
    int col = -1;
    for (int l = 0; l < static_cast<int>(ensemble.plan.lags.size()); ++l)
        if (std::abs(ensemble.plan.lags[l] - lag) <= 1e-12 * std::max(1.0, lag)) col = l;
    if (col < 0) throw std::domain_error("autocovariance: lag was not simulated");
    return column_estimate(ensemble.lag_products.col(col));
}

MomentEstimate mean_position(const PathEnsemble& ensemble) {
    return column_estimate(ensemble.path_time_averages);
}

} // namespace levylab
