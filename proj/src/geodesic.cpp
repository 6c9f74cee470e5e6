#include "kg/geodesic.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace kg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quadratic(const MetricField& g, const Vec& p, const Vec& v) { return v.dot(g(p) * v); }

void finish_diagnostics(CurveSample& c, const FlowOptions& opt) {
    c.energies.resize(c.size(), kNaN);
    c.energy_drift = 0.0;
    c.constraint_drift = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (opt.metric) {
            c.energies[i] = quadratic(*opt.metric, c.points[i], c.velocities[i]);
            c.energy_drift = std::max(c.energy_drift, std::abs(c.energies[i] - c.energies[0]));
        }
        if (opt.manifold)
            c.constraint_drift =
                std::max(c.constraint_drift, opt.manifold->constraint_residual(c.points[i]));
    }
}

IntegratorOptions integrator_options(const FlowOptions& opt) {
    IntegratorOptions io;
    io.tol = opt.tol;
    io.max_step = opt.max_step;
    io.initial_step = std::min(1e-2, opt.max_step);
    if (opt.manifold && opt.manifold->constraint()) {
        const ManifoldModel* m = opt.manifold;
        io.project = [m](double, const Vec& y) { return m->project_point(y); };
    }
    return io;
}

}  // namespace

DenseSolution flow_dense(const VectorField& k, const Vec& p0, double T, const FlowOptions& opt) {
    return integrate([&k](double, const Vec& y) { return k(y); }, 0.0, p0, T,
                     integrator_options(opt));
}

CurveSample flow(const VectorField& k, const Vec& p0, double T, const FlowOptions& opt) {
    const DenseSolution sol = flow_dense(k, p0, T, opt);
    CurveSample c;
    c.times = sol.times();
    c.points = sol.states();
    c.velocities = sol.slopes();
    c.accelerations.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c.accelerations.push_back(directional_derivative(k, c.points[i], c.velocities[i]));
    finish_diagnostics(c, opt);
    return c;
}

CurveSample shoot_geodesic(const MetricField& g, const ManifoldModel& m, const Vec& p0,
                           const Vec& v0, double T, const FlowOptions& opt) {
    m.require_on_manifold(p0);
    const Eigen::Index n = p0.size();

    auto acceleration = [&g, &m](const Vec& x, const Vec& v) -> Vec {
        Vec a = -christoffel(g, x).contract(v, v);
        if (const auto& c = m.constraint()) {
            const Vec grad = c->gradient(x);
            const Vec nu = g(x).lu().solve(grad);
            // Second derivative of c(x(s)) vanishes: grad·a + vᵀ H v = 0.
            const double lambda = -(grad.dot(a) + v.dot(c->hessian(x) * v)) / grad.dot(nu);
            a += lambda * nu;
        }
        return a;
    };
    auto rhs = [&](double, const Vec& y) -> Vec {
        Vec dy(2 * n);
        dy.head(n) = y.tail(n);
        dy.tail(n) = acceleration(y.head(n), y.tail(n));
        return dy;
    };

    IntegratorOptions io;
    io.tol = opt.tol;
    io.max_step = opt.max_step;
    io.initial_step = std::min(1e-2, opt.max_step);
    if (m.constraint()) {
        io.project = [&m, n](double, const Vec& y) {
            Vec out(2 * n);
            out.head(n) = m.project_point(y.head(n));
            out.tail(n) = m.project_tangent(out.head(n), y.tail(n));
            return out;
        };
    }

    Vec y0(2 * n);
    y0.head(n) = p0;
    y0.tail(n) = m.project_tangent(p0, v0);
    const DenseSolution sol = integrate(rhs, 0.0, y0, T, io);

    CurveSample c;
    c.times = sol.times();
    for (std::size_t i = 0; i < sol.times().size(); ++i) {
        c.points.push_back(sol.states()[i].head(n));
        c.velocities.push_back(sol.states()[i].tail(n));
        c.accelerations.push_back(sol.slopes()[i].tail(n));
    }
    FlowOptions diag = opt;
    diag.manifold = &m;
    diag.metric = &g;
    finish_diagnostics(c, diag);
    return c;
}

double geodesic_residual(const MetricField& g, const ManifoldModel& m, const CurveSample& c) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        const Vec& x = c.points[i];
        const Vec& v = c.velocities[i];
        const Vec cov = c.accelerations[i] + christoffel(g, x).contract(v, v);
        worst = std::max(worst, metric_tangent_projection(g, m, x, cov).norm());
    }
    return worst;
}

namespace {

// Certificate for a fixed deck element at time s, or none if the gaps are
// above tolerance.
std::optional<PeriodCertificate> certify_at(const VectorField& k, const Vec& p0, const Vec& x,
                                            const DeckElement& gamma, double s,
                                            const PeriodOptions& opt) {
    const AffineMap back = gamma.map.inverse();
    PeriodCertificate cert;
    cert.period = s;
    cert.deck = gamma;
    cert.position_gap = (back.apply(x) - p0).norm();
    cert.velocity_gap = (back.push(k(x)) - k(p0)).norm();
    if (cert.position_gap <= opt.tol_period && cert.velocity_gap <= opt.tol_period) return cert;
    return std::nullopt;
}

}  // namespace

std::optional<PeriodCertificate> check_return(const ManifoldModel& m, const VectorField& k,
                                              const Vec& p0, double s,
                                              const PeriodOptions& opt) {
    FlowOptions fo;
    fo.tol = opt.integration_tol;
    fo.max_step = opt.max_step;
    fo.manifold = &m;
    const DenseSolution sol = flow_dense(k, p0, s, fo);
    const Vec x = sol.states().back();
    const auto [dist, gamma] = m.quotient_distance(p0, x);
    (void)dist;
    return certify_at(k, p0, x, gamma, s, opt);
}

std::optional<PeriodCertificate> detect_period(const ManifoldModel& m, const VectorField& k,
                                               const Vec& p0, double horizon,
                                               const PeriodOptions& opt) {
    const Vec k0 = k(p0);
    if (k0.norm() < 1e-12 || horizon <= opt.grid) return std::nullopt;

    FlowOptions fo;
    fo.tol = opt.integration_tol;
    fo.max_step = opt.max_step;
    fo.manifold = &m;
    const DenseSolution sol = flow_dense(k, p0, horizon, fo);

    const auto steps = static_cast<std::size_t>(std::floor(horizon / opt.grid));
    std::vector<double> dist(steps + 1);
    std::vector<DeckElement> elems(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
        auto [d, e] = m.quotient_distance(p0, sol.state(j * opt.grid));
        dist[j] = d;
        elems[j] = std::move(e);
    }
    const double near = std::max(0.05, 4.0 * opt.grid * k0.norm());

    for (std::size_t j = 1; j <= steps; ++j) {
        const bool left_ok = dist[j] <= dist[j - 1];
        const bool right_ok = j == steps || dist[j] <= dist[j + 1];
        if (!left_ok || !right_ok || dist[j] > near) continue;

        const DeckElement& gamma = elems[j];
        const Vec target = gamma.map.apply(p0);
        // Derivative of ½|c(s) - γ p0|² changes sign from - to + at the return.
        auto slope = [&](double s) { return sol.slope(s).dot(sol.state(s) - target); };
        double lo = (j - 1) * opt.grid;
        double hi = std::min(horizon, (j + 1) * opt.grid);
        double s_best = j * opt.grid;
        if (slope(lo) <= 0.0 && slope(hi) >= 0.0) {
            for (int it = 0; it < opt.bisection_steps; ++it) {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) < 0.0 ? lo : hi) = mid;
            }
            s_best = 0.5 * (lo + hi);
        }
        if (s_best <= 1e-6) continue;
        if (auto cert = certify_at(k, p0, sol.state(s_best), gamma, s_best, opt)) return cert;
    }
    return std::nullopt;
}

CurveSample translate_geodesic(const KillingFamily& family, std::size_t l,
                               const CurveSample& gamma, double t, const ManifoldModel& m,
                               const MetricField* g) {
    if (t == 0.0) return gamma;
    const VectorField& k = family.members.at(l).field;
    constexpr double h = 1e-4;
    CurveSample out;
    out.times = gamma.times;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const Vec& p = gamma.points[i];
        const Vec& v = gamma.velocities[i];
        const Vec& a = gamma.accelerations[i];
        const Eigen::Index n = p.size();
        // Stencil points p, p ± h v, p ± h a integrated as one system so the
        // step sequence (and hence the integration error) is shared.
        Vec stacked(5 * n);
        stacked << p, p + h * v, p - h * v, p + h * a, p - h * a;
        auto rhs = [&k, n](double, const Vec& y) {
            Vec dy(5 * n);
            for (int b = 0; b < 5; ++b) dy.segment(b * n, n) = k(y.segment(b * n, n));
            return dy;
        };
        IntegratorOptions io;
        io.tol = 1e-13;
        io.max_step = 0.05;
        const Vec y = integrate(rhs, 0.0, stacked, t, io).states().back();
        const Vec c0 = y.segment(0, n), vp = y.segment(n, n), vm = y.segment(2 * n, n);
        const Vec ap = y.segment(3 * n, n), am = y.segment(4 * n, n);
        out.points.push_back(m.project_point(c0));
        out.velocities.push_back((vp - vm) / (2 * h));
        out.accelerations.push_back((ap - am) / (2 * h) + (vp - 2 * c0 + vm) / (h * h));
    }
    FlowOptions diag;
    diag.manifold = &m;
    diag.metric = g;
    finish_diagnostics(out, diag);
    return out;
}

namespace {

double point_segment(const Vec& x, const Vec& a, const Vec& b) {
    const Vec ab = b - a;
    const double len2 = ab.squaredNorm();
    const double s = len2 == 0.0 ? 0.0 : std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
    return (a + s * ab - x).norm();
}

double directed_hausdorff(const ManifoldModel& m, const CurveSample& a, const CurveSample& b) {
    double worst = 0.0;
    for (const Vec& x : a.points) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        DeckElement arg_elem;
        for (std::size_t j = 0; j < b.size(); ++j) {
            auto [d, e] = m.quotient_distance(x, b.points[j]);
            if (d < best) {
                best = d;
                arg = j;
                arg_elem = std::move(e);
            }
        }
        const Vec gx = arg_elem.map.apply(x);
        if (arg > 0) best = std::min(best, point_segment(gx, b.points[arg - 1], b.points[arg]));
        if (arg + 1 < b.size())
            best = std::min(best, point_segment(gx, b.points[arg], b.points[arg + 1]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const ManifoldModel& m, const CurveSample& a, const CurveSample& b) {
    return std::max(directed_hausdorff(m, a, b), directed_hausdorff(m, b, a));
}

void write_curve_csv(std::ostream& os, const CurveSample& c) {
    const Eigen::Index n = c.points.empty() ? 0 : c.points.front().size();
    os << "s";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
    for (Eigen::Index i = 1; i <= n; ++i) os << ",v" << i;
    os << ",f\n";
    os << std::setprecision(17);
    for (std::size_t r = 0; r < c.size(); ++r) {
        os << c.times[r];
        for (Eigen::Index i = 0; i < n; ++i) os << ',' << c.points[r](i);
        for (Eigen::Index i = 0; i < n; ++i) os << ',' << c.velocities[r](i);
        os << ',' << c.energies[r] << '\n';
    }
}

}  // namespace kg
