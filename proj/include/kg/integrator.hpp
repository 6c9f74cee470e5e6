#pragma once

#include "kg/core.hpp"

#include <vector>

namespace kg {

struct IntegratorOptions {
    double tol = 1e-10;           // local error tolerance (absolute and relative)
    double initial_step = 1e-2;
    double max_step = 0.05;
    double min_step = 1e-12;      // below this the integration fails
    /// Applied to every accepted state (constraint stabilisation).
    std::function<Vec(double, const Vec&)> project;
};

/// Accepted steps of an adaptive run with cubic Hermite dense output.
class DenseSolution {
public:
    DenseSolution() = default;

    const std::vector<double>& times() const { return t_; }
    const std::vector<Vec>& states() const { return y_; }
    const std::vector<Vec>& slopes() const { return f_; }
    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }

    Vec state(double t) const;
    Vec slope(double t) const;

    void push(double t, Vec y, Vec f);

private:
    std::size_t segment(double t) const;

    std::vector<double> t_;
    std::vector<Vec> y_;
    std::vector<Vec> f_;
};

using OdeRhs = std::function<Vec(double, const Vec&)>;

/// Dormand–Prince 5(4) with elementary step-size control. Integrates from
/// t0 to t1 (t1 may be below t0). Throws StiffnessError on step collapse.
DenseSolution integrate(const OdeRhs& rhs, double t0, const Vec& y0, double t1,
                        const IntegratorOptions& options = {});

}  // namespace kg
