#pragma once

#include <Eigen/Dense>
#include <functional>

namespace levylab {

/// A real function sampled on a uniform grid that is symmetric about x = 0.
/// The grid always has an odd number of points (at least 9) so that x = 0 is
/// a sample; x_i = (i - c) * dx with c = (n-1)/2, hence x_min = -c * dx.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double dx, Eigen::ArrayXd values);

    // Zero-initialised grid covering [-half_width, half_width] with n points.
    static GridFunction centered(double half_width, int n);
    // Grid filled by evaluating f at every node.
    static GridFunction sampled(double half_width, int n, const std::function<double(double)>& f);

    int size() const { return static_cast<int>(values_.size()); }
    double dx() const { return dx_; }
    int center_index() const { return (size() - 1) / 2; }
    double x(int i) const { return (i - center_index()) * dx_; }
    double x_min() const { return x(0); }
    double x_max() const { return x(size() - 1); }
    double half_width() const { return x_max(); }

    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::ArrayXd& values() { return values_; }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }

    // Trapezoidal integral over the grid.
    double trapezoid() const;

    // Max |f(x) - f(-x)| over the grid, as an absolute deviation.
    double evenness_defect() const;
    bool is_even(double tol) const { return evenness_defect() <= tol; }

    // (f(x) + f(-x)) / 2; exact bitwise symmetry of the result.
    GridFunction symmetrized() const;

    // Piecewise-linear interpolation; clamps to the boundary values outside.
    double interpolate(double x) const;

private:
    double dx_ = 0.0;
    Eigen::ArrayXd values_;
};

// Trapezoidal integral of the pointwise product a*b (grids must agree).
double trapezoid_product(const GridFunction& a, const GridFunction& b);

// Contiguous symmetric index window [lo, hi] on some parent grid.
struct IndexWindow {
    int lo = 0;
    int hi = 0;
    int size() const { return hi - lo + 1; }
};

// Restrict f to the window (window must be symmetric about the centre).
GridFunction restrict_to(const GridFunction& f, const IndexWindow& w);

} // namespace levylab
