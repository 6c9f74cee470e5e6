#include "kg/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace kg {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

void DenseSolution::push(double t, Vec y, Vec f) {
    t_.push_back(t);
    y_.push_back(std::move(y));
    f_.push_back(std::move(f));
}

std::size_t DenseSolution::segment(double t) const {
    // Works for both increasing and decreasing time grids.
    const bool forward = t_.back() >= t_.front();
    auto it = forward ? std::upper_bound(t_.begin(), t_.end(), t)
                      : std::upper_bound(t_.begin(), t_.end(), t, std::greater<>());
    std::size_t i = static_cast<std::size_t>(it - t_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, t_.size() - 2);
}

Vec DenseSolution::state(double t) const {
    if (t_.size() == 1) return y_.front();
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y_[i] + h * h10 * f_[i] + h01 * y_[i + 1] + h * h11 * f_[i + 1];
}

Vec DenseSolution::slope(double t) const {
    if (t_.size() == 1) return f_.front();
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -d00;
    const double d11 = 3 * s * s - 2 * s;
    return (d00 * y_[i] + d01 * y_[i + 1]) / h + d10 * f_[i] + d11 * f_[i + 1];
}

DenseSolution integrate(const OdeRhs& rhs, double t0, const Vec& y0, double t1,
                        const IntegratorOptions& opt) {
    DenseSolution sol;
    Vec y = opt.project ? opt.project(t0, y0) : y0;
    Vec k1 = rhs(t0, y);
    sol.push(t0, y, k1);
    if (t1 == t0) return sol;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double h = std::min({opt.initial_step, opt.max_step, span});
    double t = t0;

    while (dir * (t1 - t) > 0) {
        h = std::min(h, std::abs(t1 - t));
        const bool last = std::abs(t1 - t) - h <= 1e-14 * std::max(1.0, std::abs(t1));
        const double hs = dir * h;

        const Vec k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
        const Vec k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        const Vec k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 =
            rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = rhs(t + hs, y5);
        const Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double ratio = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale = opt.tol * (1.0 + std::max(std::abs(y(i)), std::abs(y5(i))));
            ratio = std::max(ratio, std::abs(err(i)) / scale);
        }

        if (ratio <= 1.0) {
            t = last ? t1 : t + hs;
            if (opt.project) {
                y = opt.project(t, y5);
                k1 = rhs(t, y);
            } else {
                y = y5;
                k1 = k7;
            }
            sol.push(t, y, k1);
        }
        const double factor =
            ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        h = std::min(h * factor, opt.max_step);
        if (h < opt.min_step && dir * (t1 - t) > 0)
            throw StiffnessError("step size collapsed below minimum");
    }
    return sol;
}

}  // namespace kg
