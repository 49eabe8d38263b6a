#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "levylab/grid.hpp"

namespace levylab {

/// Drift b(x) = phi0'(x) / phi0(x) by central differences on the interior of
/// the grid; one-sided differences at the edges. phi0 must be positive on
/// the whole grid it is given (pass the retained subgrid).
GridFunction drift_field(const GridFunction& phi0);

struct SimulationPlan {
    double dt = 0.01;
    int n_steps = 0;
    int n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> windows; // window half-widths T for the integral statistics
    std::vector<double> lags;    // time lags for autocovariance statistics
    bool keep_paths = false;     // store full trajectories (memory permitting)
};

/// Ensemble statistics of the ground-state diffusion
///   dX = b(X) dt + dW,  X(0) ~ rho,
/// integrated by Euler-Maruyama with reflecting walls at the grid edges.
/// Window integrals W_T = Int_0^{2T} X dt (trapezoid along the path) are
/// accumulated per path; stationarity makes the placement of the window
/// immaterial. Per-path generators are seeded by a counter construction so
/// the ensemble is independent of any batching.
struct PathEnsemble {
    SimulationPlan plan;
    Eigen::MatrixXd window_integrals;    // n_paths x windows.size()
    Eigen::MatrixXd lag_products;        // n_paths x lags.size(), time-averaged X(t)X(t+lag)
    Eigen::VectorXd path_time_averages;  // per-path mean of X
    std::optional<Eigen::MatrixXd> paths; // n_paths x (n_steps+1) when kept
    double wall_lo = 0.0, wall_hi = 0.0;
};

PathEnsemble simulate(const GridFunction& drift, const GridFunction& rho,
                      const SimulationPlan& plan);

struct Chi2Estimate {
    double T = 0.0;
    double value = 0.0;
    double standard_error = 0.0; // jackknife over paths
    int n_paths = 0;
};

/// (1+2T)^3/(2T)^4 [ m4 - 3 m2^2 ] over the per-path window integrals, with
/// a leave-one-out jackknife standard error. Requires >= 100 paths and that
/// T was on the simulation plan.
Chi2Estimate estimate_chi2(const PathEnsemble& ensemble, double T);

struct MomentEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Ensemble average of the per-path time-averaged X(t)X(t+lag).
MomentEstimate autocovariance(const PathEnsemble& ensemble, double lag);

/// Ensemble average of the per-path time-averaged X (should vanish).
MomentEstimate mean_position(const PathEnsemble& ensemble);

} // namespace levylab
