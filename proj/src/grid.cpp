#include "levylab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace levylab {

namespace {

void validate(double dx, const Eigen::ArrayXd& values) {
    const auto n = values.size();
    if (n < 9) throw std::invalid_argument("GridFunction: need at least 9 points");
    if (n % 2 == 0) throw std::invalid_argument("GridFunction: point count must be odd");
    if (!(dx > 0.0)) throw std::invalid_argument("GridFunction: dx must be positive");
    if (!values.isFinite().all()) throw std::invalid_argument("GridFunction: values must be finite");
}

} // namespace

GridFunction::GridFunction(double dx, Eigen::ArrayXd values) : dx_(dx), values_(std::move(values)) {
    validate(dx_, values_);
}

GridFunction GridFunction::centered(double half_width, int n) {
    if (n < 9 || n % 2 == 0) throw std::invalid_argument("GridFunction: point count must be odd, >= 9");
    if (!(half_width > 0.0)) throw std::invalid_argument("GridFunction: half_width must be positive");
    return GridFunction(half_width / ((n - 1) / 2), Eigen::ArrayXd::Zero(n));
}

GridFunction GridFunction::sampled(double half_width, int n, const std::function<double(double)>& f) {
    GridFunction g = centered(half_width, n);
    for (int i = 0; i < n; ++i) g.values_[i] = f(g.x(i));
    validate(g.dx_, g.values_);
    return g;
}

double GridFunction::trapezoid() const {
    const auto n = values_.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sum += values_[i];
    sum -= 0.5 * (values_[0] + values_[n - 1]);
    return sum * dx_;
}

double GridFunction::evenness_defect() const {
    const auto n = values_.size();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(values_[i] - values_[n - 1 - i]));
    return worst;
}

GridFunction GridFunction::symmetrized() const {
    GridFunction out = *this;
    const auto n = values_.size();
    for (Eigen::Index i = 0; i <= n - 1 - i; ++i) {
        const double v = 0.5 * (values_[i] + values_[n - 1 - i]);
        out.values_[i] = v;
        out.values_[n - 1 - i] = v;
    }
    return out;
}

double GridFunction::interpolate(double xq) const {
    const int n = size();
    if (xq <= x_min()) return values_[0];
    if (xq >= x_max()) return values_[n - 1];
    const double u = (xq - x_min()) / dx_;
    int i = static_cast<int>(u);
    if (i >= n - 1) i = n - 2;
    const double t = u - i;
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double trapezoid_product(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size() || a.dx() != b.dx())
        throw std::invalid_argument("trapezoid_product: grids must agree");
    const int n = a.size();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += a[i] * b[i];
    sum -= 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    return sum * a.dx();
}

GridFunction restrict_to(const GridFunction& f, const IndexWindow& w) {
    const int n = f.size();
    if (w.lo < 0 || w.hi >= n || w.lo + w.hi != n - 1)
        throw std::invalid_argument("restrict_to: window must be symmetric about the centre");
    return GridFunction(f.dx(), f.values().segment(w.lo, w.size()));
}

} // namespace levylab
