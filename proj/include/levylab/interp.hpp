#pragma once

#include <Eigen/Dense>

namespace levylab {

/// Monotone cubic (Fritsch-Carlson) interpolant on a strictly increasing
/// abscissa. Preserves local monotonicity, so nonnegative data never
/// produce negative interpolated values between nodes.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(Eigen::ArrayXd x, Eigen::ArrayXd y);

    double operator()(double x) const; // clamps outside [x_front, x_back]
    double x_front() const { return x_[0]; }
    double x_back() const { return x_[x_.size() - 1]; }

private:
    Eigen::ArrayXd x_, y_, m_; // node slopes
};

} // namespace levylab
