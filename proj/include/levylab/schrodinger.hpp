#pragma once

#include <Eigen/Dense>
#include <vector>

#include "levylab/grid.hpp"

namespace levylab {

/// Lowest-K spectrum of H = -(1/2) d^2/dx^2 + V(x) with Dirichlet walls one
/// step outside the potential grid. Energies are shifted so E_0 = 0; the raw
/// ground-state energy is kept as a discretisation diagnostic.
struct Spectrum {
    Eigen::VectorXd energies;   // shifted, ascending, energies[0] == 0
    double e0_raw = 0.0;
    Eigen::MatrixXd states;     // n x K, column k trapezoid-normalised
    std::vector<int> parity;    // (-1)^k alternation, detected then enforced
    double dx = 0.0;

    int n_states() const { return static_cast<int>(energies.size()); }
    int n_points() const { return static_cast<int>(states.rows()); }
    double x(int i) const { return (i - (n_points() - 1) / 2) * dx; }
    GridFunction state(int k) const;
};

/// Sturm-sequence bisection for the K lowest eigenvalues of the symmetric
/// tridiagonal discretisation, followed by inverse iteration for the
/// eigenvectors. K must not exceed n/4. V must be even on its grid.
Spectrum solve(const GridFunction& V, int K);

/// Position matrix elements q_kl = Int phi_k x phi_l dx (trapezoid), with the
/// shifted energies carried along. Symmetric; parity makes q_kl vanish for
/// even k + l.
struct MatrixElements {
    Eigen::MatrixXd q;
    Eigen::VectorXd energies; // shifted, energies[0] == 0
};

MatrixElements matrix_elements(const Spectrum& spec);

/// Exact-reference variant used by analytic models and tests.
MatrixElements matrix_elements_from(Eigen::MatrixXd q, Eigen::VectorXd energies);

/// Keep only the first K states of an elements set.
MatrixElements truncate(const MatrixElements& me, int K);

/// Richardson comparison of eigenvalues across one or more grid refinements
/// (dx, dx/2, ...). For the second-order stencil the estimated error of the
/// fine solve is |E_coarse - E_fine| / 3 per level.
struct ConvergenceReport {
    struct Level {
        int points = 0;
        Eigen::VectorXd energies;            // finer level
        Eigen::VectorXd estimated_rel_error; // per eigenvalue
        std::vector<bool> flagged;           // estimate above tolerance
    };
    std::vector<Level> levels;
    double tolerance = 1e-3;
    bool any_flagged() const;
};

ConvergenceReport convergence_sweep(const GridFunction& V, int K, int refinement_levels = 1,
                                    double tolerance = 1e-3);

} // namespace levylab
