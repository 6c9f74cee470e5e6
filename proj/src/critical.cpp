#include "kg/critical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace kg {

std::string to_string(CriticalKind kind) {
    switch (kind) {
        case CriticalKind::Min: return "Min";
        case CriticalKind::Max: return "Max";
        case CriticalKind::Saddle: return "Saddle";
        case CriticalKind::DegenerateConstant: return "DegenerateConstant";
    }
    return "?";
}

int worker_count(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int n = requested > 0 ? requested : hw;
    if (const char* env = std::getenv("KG_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
}

double f_eval(const MetricField& g, const ManifoldModel& m, const VectorField& k, const Vec& p) {
    m.require_on_manifold(p);
    const Vec kp = k(p);
    return kp.dot(g(p) * kp);
}

Vec grad_f(const MetricField& g, const ManifoldModel& m, const VectorField& k, const Vec& p) {
    m.require_on_manifold(p);
    const Mat basis = m.tangent_basis(p);
    const Vec gk = g(p) * k(p);
    Vec df(basis.cols());
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
        df(i) = 2.0 * covariant_derivative(g, m, k, basis.col(i), p).dot(gk);
    return raise_index(g, basis, p, df);
}

Vec killing_acceleration_gradient(const MetricField& g, const ManifoldModel& m,
                                  const VectorField& k, const Vec& p) {
    m.require_on_manifold(p);
    return -2.0 * covariant_derivative(g, m, k, k(p), p);
}

namespace {

// f pulled back to tangent coordinates y through the projection retraction.
struct LocalChart {
    const MetricField& g;
    const ManifoldModel& m;
    const VectorField& k;
    Vec base;
    Mat basis;

    LocalChart(const MetricField& g_, const ManifoldModel& m_, const VectorField& k_, Vec p)
        : g(g_), m(m_), k(k_), base(std::move(p)), basis(m_.tangent_basis(base)) {}

    Vec point(const Vec& y) const { return m.project_point(base + basis * y); }
    double value(const Vec& y) const {
        const Vec p = point(y);
        const Vec kp = k(p);
        return kp.dot(g(p) * kp);
    }
    Vec gradient() const {
        const Eigen::Index n = basis.cols();
        Vec out(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vec e = Vec::Unit(n, i) * kFirstDiffStep;
            out(i) = (value(e) - value(-e)) / (2 * kFirstDiffStep);
        }
        return out;
    }
    Mat hessian() const {
        const Eigen::Index n = basis.cols();
        const double h = kSecondDiffStep;
        Mat out(n, n);
        const double f0 = value(Vec::Zero(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vec ei = Vec::Unit(n, i) * h;
            out(i, i) = (value(ei) - 2 * f0 + value(-ei)) / (h * h);
            for (Eigen::Index j = 0; j < i; ++j) {
                const Vec ej = Vec::Unit(n, j) * h;
                out(i, j) = out(j, i) =
                    (value(ei + ej) - value(ei - ej) - value(-ei + ej) + value(-ei - ej)) /
                    (4 * h * h);
            }
        }
        return out;
    }
    /// Flow direction in chart coordinates.
    Vec flow_direction() const { return basis.transpose() * k(base); }
};

// Orthonormal complement of the flow direction (full space if K vanishes).
Mat transverse_complement(const Vec& kappa) {
    const Eigen::Index n = kappa.size();
    if (kappa.norm() < 1e-10) return Mat::Identity(n, n);
    const Vec u = kappa.normalized();
    Eigen::HouseholderQR<Mat> qr(u);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    return q.rightCols(n - 1);
}

}  // namespace

Classification classify_critical(const MetricField& g, const ManifoldModel& m,
                                 const VectorField& k, const Vec& p) {
    m.require_on_manifold(p);
    const LocalChart chart(g, m, k, p);
    const Mat q = transverse_complement(chart.flow_direction());
    const Mat h = q.transpose() * chart.hessian() * q;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.transpose()));
    Classification c;
    c.transverse_eigenvalues = es.eigenvalues();
    constexpr double zero = 1e-6;
    int pos = 0, neg = 0, flat = 0;
    for (Eigen::Index i = 0; i < c.transverse_eigenvalues.size(); ++i) {
        const double ev = c.transverse_eigenvalues(i);
        if (ev > zero) ++pos;
        else if (ev < -zero) ++neg;
        else ++flat;
    }
    if (pos == 0 && neg == 0) throw DomainError("f is constant near the point; nothing to classify");
    c.degenerate = flat > 0;
    c.kind = neg == 0 ? CriticalKind::Min : pos == 0 ? CriticalKind::Max : CriticalKind::Saddle;
    return c;
}

namespace {

struct Candidate {
    bool converged = false;
    Vec point;
    double f = 0.0;
};

// Metric for the descent direction: g_R when K is timelike for a
// Lorentzian g, the ambient Euclidean form otherwise.
Mat descent_form(const MetricField& g, const VectorField& k, const LocalChart& chart) {
    const Eigen::Index n = chart.basis.cols();
    if (g.role() == MetricRole::Lorentzian) {
        const Vec kp = k(chart.base);
        if (kp.dot(g(chart.base) * kp) < -1e-10) {
            const Mat gr = lorentz_to_riemann(g, k)(chart.base);
            return chart.basis.transpose() * gr * chart.basis;
        }
    }
    if (g.role() == MetricRole::Riemannian)
        return chart.basis.transpose() * g(chart.base) * chart.basis;
    return Mat::Identity(n, n);
}

// Descends sign * f from p, then Newton-refines on the transverse slice.
Candidate descend(const MetricField& g, const ManifoldModel& m, const VectorField& k, Vec p,
                  double sign, const SearchOptions& opt) {
    double step = 0.1;
    for (int it = 0; it < 3000; ++it) {
        const LocalChart chart(g, m, k, p);
        const Vec grad = sign * chart.gradient();
        if (grad.norm() < 1e-4) break;
        const Vec dir = -descent_form(g, k, chart).ldlt().solve(grad);
        const double f0 = sign * chart.value(Vec::Zero(dir.size()));
        const double slope = grad.dot(dir);
        step = std::min(step * 2.0, 1.0);
        while (step > 1e-12 && sign * chart.value(step * dir) > f0 + 1e-4 * step * slope) step *= 0.5;
        if (step <= 1e-12) break;
        p = chart.point(step * dir);
    }

    Candidate c;
    for (int it = 0; it < 40; ++it) {
        const LocalChart chart(g, m, k, p);
        const Vec grad = chart.gradient();
        if (grad.norm() <= 0.1 * opt.grad_tol) break;
        const Mat hess = chart.hessian();
        const Vec kappa = chart.flow_direction();
        const Eigen::Index n = grad.size();
        // Bordered system: H y + mu kappa = -grad, <y, kappa> = 0.
        Mat a = Mat::Zero(n + 1, n + 1);
        a.topLeftCorner(n, n) = hess;
        a.topRightCorner(n, 1) = kappa;
        a.bottomLeftCorner(1, n) = kappa.transpose();
        Vec rhs = Vec::Zero(n + 1);
        rhs.head(n) = -grad;
        Vec y = a.completeOrthogonalDecomposition().solve(rhs).head(n);
        if (y.norm() > 0.1) y *= 0.1 / y.norm();
        p = chart.point(y);
    }
    c.point = p;
    c.f = f_eval(g, m, k, p);
    c.converged = grad_f(g, m, k, p).norm() <= opt.grad_tol;
    return c;
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const int workers = std::min<int>(threads, static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

// Smallest quotient distance from q to a stored orbit, refined on the dense
// output around the best grid point.
double distance_to_orbit(const ManifoldModel& m, const DenseSolution& orbit, const Vec& q) {
    const double t_end = orbit.t_end();
    const double grid = 1e-2;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / grid));
    double best = std::numeric_limits<double>::infinity();
    double s_best = 0.0;
    for (std::size_t j = 0; j <= steps; ++j) {
        const double s = std::min(t_end, j * grid);
        const double d = m.quotient_distance(orbit.state(s), q).first;
        if (d < best) {
            best = d;
            s_best = s;
        }
    }
    const DeckElement e = m.quotient_distance(orbit.state(s_best), q).second;
    const AffineMap back = e.map.inverse();
    const Vec target = back.apply(q);
    double lo = std::max(0.0, s_best - grid), hi = std::min(t_end, s_best + grid);
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if ((orbit.state(m1) - target).norm() < (orbit.state(m2) - target).norm()) hi = m2;
        else lo = m1;
    }
    return std::min(best, (orbit.state(0.5 * (lo + hi)) - target).norm());
}

CriticalOrbit finish_orbit(const MetricField& g, const ManifoldModel& m, const KillingField& k,
                           const Vec& p, CriticalKind forced, bool constant,
                           const SearchOptions& opt) {
    CriticalOrbit o;
    o.representative = p;
    o.f_value = f_eval(g, m, k.field, p);
    o.grad_norm = grad_f(g, m, k.field, p).norm();
    if (constant) {
        o.classification = forced;
        o.degenerate = true;
    } else {
        const Classification c = classify_critical(g, m, k.field, p);
        o.classification = c.kind;
        o.degenerate = c.degenerate;
    }
    if (auto cert = detect_period(m, k.field, p, opt.horizon, opt.period)) o.period = cert->period;
    FlowOptions fo;
    fo.manifold = &m;
    fo.metric = &g;
    fo.tol = opt.period.integration_tol;
    const double span = o.period.value_or(1.0);
    o.geodesic_residual = geodesic_residual(g, m, flow(k.field, p, span, fo));
    return o;
}

}  // namespace

std::vector<CriticalOrbit> find_critical_orbits(const MetricField& g, const ManifoldModel& m,
                                                const KillingField& k,
                                                const SearchOptions& opt) {
    (void)m.neighbourhood();
    std::mt19937_64 rng(opt.seed);
    std::vector<Vec> probes;
    std::vector<double> values;
    for (int i = 0; i < opt.variance_samples; ++i) {
        probes.push_back(m.sample(rng));
        values.push_back(f_eval(g, m, k.field, probes.back()));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());

    if (var < opt.variance_threshold)
        return {finish_orbit(g, m, k, probes.front(), CriticalKind::DegenerateConstant, true, opt)};

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    std::vector<Vec> starts{probes[min_it - values.begin()], probes[max_it - values.begin()]};
    while (static_cast<int>(starts.size()) < opt.budget) starts.push_back(m.sample(rng));
    starts.resize(std::max(opt.budget, 0));

    // Each start descends f and -f.
    std::vector<Candidate> candidates(2 * starts.size());
    parallel_for(candidates.size(), worker_count(opt.threads), [&](std::size_t i) {
        candidates[i] = descend(g, m, k.field, starts[i / 2], i % 2 == 0 ? 1.0 : -1.0, opt);
    });

    struct Kept {
        Vec point;
        double f;
        DenseSolution orbit;
    };
    std::vector<Kept> kept;
    FlowOptions fo;
    fo.manifold = &m;
    fo.tol = opt.period.integration_tol;
    for (const auto& c : candidates) {
        if (!c.converged) continue;
        bool duplicate = false;
        for (const auto& o : kept) {
            if (std::abs(o.f - c.f) > 1e-6 * std::max(1.0, std::abs(c.f))) continue;
            if (distance_to_orbit(m, o.orbit, c.point) <= opt.dedup_tol) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        const auto cert = detect_period(m, k.field, c.point, opt.horizon, opt.period);
        const double span = cert ? cert->period : opt.horizon;
        kept.push_back({c.point, c.f, flow_dense(k.field, c.point, span, fo)});
    }
    if (kept.empty()) throw SearchFailure("no start converged to a critical point");

    std::vector<CriticalOrbit> out(kept.size());
    parallel_for(kept.size(), worker_count(opt.threads), [&](std::size_t i) {
        out[i] = finish_orbit(g, m, k, kept[i].point, CriticalKind::Saddle, false, opt);
    });
    std::stable_sort(out.begin(), out.end(),
                     [](const CriticalOrbit& a, const CriticalOrbit& b) { return a.f_value < b.f_value; });
    return out;
}

}  // namespace kg
