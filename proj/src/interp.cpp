#include "levylab/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace levylab {

namespace {

// Second-order one-sided boundary slope, clamped so the end interval keeps
// the shape of the data (the pchip endpoint rule).
double endpoint_slope(double h0, double h1, double del0, double del1) {
    const double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (d * del0 <= 0.0) return 0.0;
    if (del0 * del1 < 0.0 && std::abs(d) > 3.0 * std::abs(del0)) return 3.0 * del0;
    return d;
}

} // namespace

MonotoneCubic::MonotoneCubic(Eigen::ArrayXd x, Eigen::ArrayXd y)
    : x_(std::move(x)), y_(std::move(y)) {
    const auto n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need matching arrays, n >= 2");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: abscissa must increase");

    // Fritsch-Carlson slope limiting.
    Eigen::ArrayXd d(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    m_.resize(n);
    if (n == 2) {
        m_[0] = d[0];
        m_[1] = d[0];
    } else {
        m_[0] = endpoint_slope(x_[1] - x_[0], x_[2] - x_[1], d[0], d[1]);
        m_[n - 1] = endpoint_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3],
                                   d[n - 2], d[n - 3]);
    }
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        m_[i] = (d[i - 1] * d[i] > 0.0) ? 0.5 * (d[i - 1] + d[i]) : 0.0;

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
            continue;
        }
        const double a = m_[i] / d[i];
        const double b = m_[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double t = 3.0 / std::sqrt(s);
            m_[i] = t * a * d[i];
            m_[i + 1] = t * b * d[i];
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    const auto n = x_.size();
    if (x <= x_[0]) return y_[0];
    if (x >= x_[n - 1]) return y_[n - 1];

    Eigen::Index lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const Eigen::Index mid = (lo + hi) / 2;
        (x_[mid] <= x ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y_[lo] + h10 * h * m_[lo] + h01 * y_[lo + 1] + h11 * h * m_[lo + 1];
}

} // namespace levylab
