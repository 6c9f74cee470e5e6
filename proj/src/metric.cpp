#include "kg/metric.hpp"

#include <cmath>

namespace kg {

MetricField::MetricField(Evaluator evaluator, Signature signature, MetricRole role)
    : evaluator_(std::move(evaluator)), signature_(signature), role_(role) {
    if (role_ == MetricRole::Riemannian && signature_.n_minus != 0)
        throw DomainError("Riemannian role with negative directions");
    if (role_ == MetricRole::Lorentzian && signature_.n_minus != 1)
        throw DomainError("Lorentzian role needs exactly one negative direction");
}

MetricField MetricField::constant(const Mat& form, Signature signature, MetricRole role) {
    return MetricField([form](const Vec&) { return form; }, signature, role);
}

Mat MetricField::operator()(const Vec& p) const {
    Mat a = evaluator_(p);
    return 0.5 * (a + a.transpose());
}

std::string to_string(MetricRole role) {
    switch (role) {
        case MetricRole::Riemannian: return "Riemannian";
        case MetricRole::Lorentzian: return "Lorentzian";
        case MetricRole::SemiRiemannian: return "SemiRiemannian";
    }
    return "?";
}

double metric_eval(const MetricField& g, const ManifoldModel& m, const Vec& p, const Vec& v,
                   const Vec& w) {
    m.require_on_manifold(p);
    const Mat a = g(p);
    // Both orders summed so the result is bitwise symmetric in (v, w).
    return 0.5 * (v.dot(a * w) + w.dot(a * v));
}

Signature tangent_signature(const MetricField& g, const ManifoldModel& m, const Vec& p) {
    const Mat b = m.tangent_basis(p);
    const Mat restricted = b.transpose() * g(p) * b;
    Eigen::SelfAdjointEigenSolver<Mat> es(restricted);
    Signature s;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > 1e-12) ++s.n_plus;
        else if (ev < -1e-12) ++s.n_minus;
    }
    return s;
}

Vec Christoffel::contract(const Vec& v, const Vec& w) const {
    Vec out(static_cast<Eigen::Index>(gamma.size()));
    for (std::size_t k = 0; k < gamma.size(); ++k) out(k) = v.dot(gamma[k] * w);
    return out;
}

Christoffel christoffel(const MetricField& g, const Vec& p) {
    const Eigen::Index n = p.size();
    const Mat g0 = g(p);
    if (std::abs(g0.determinant()) < 1e-12) throw SingularityError("degenerate metric");
    const Mat ginv = g0.inverse();

    std::vector<Mat> dg(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        Vec xp = p, xm = p;
        xp(l) += kFirstDiffStep;
        xm(l) -= kFirstDiffStep;
        dg[l] = (g(xp) - g(xm)) / (2 * kFirstDiffStep);
    }

    // lowered(l)(i, j) = ½ (∂_i g_lj + ∂_j g_li - ∂_l g_ij)
    std::vector<Mat> lowered(n, Mat::Zero(n, n));
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                lowered[l](i, j) = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));

    Christoffel c;
    c.gamma.assign(n, Mat::Zero(n, n));
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
            if (ginv(k, l) != 0.0) c.gamma[k] += ginv(k, l) * lowered[l];
    return c;
}

Vec metric_tangent_projection(const MetricField& g, const ManifoldModel& m, const Vec& p,
                              const Vec& u) {
    if (!m.constraint()) return u;
    const Vec n = m.constraint()->gradient(p);
    const Vec nu = g(p).lu().solve(n);
    const double denom = n.dot(nu);
    if (std::abs(denom) < 1e-14) throw SingularityError("constraint normal is null for g");
    return u - (n.dot(u) / denom) * nu;
}

Vec covariant_derivative(const MetricField& g, const ManifoldModel& m, const VectorField& x,
                         const Vec& v, const Vec& p) {
    const Vec ambient = directional_derivative(x, p, v) + christoffel(g, p).contract(v, x(p));
    return metric_tangent_projection(g, m, p, ambient);
}

Vec raise_index(const MetricField& g, const Mat& basis, const Vec& p, const Vec& covector) {
    const Mat gram = basis.transpose() * g(p) * basis;
    const Eigen::FullPivLU<Mat> lu(gram);
    if (!lu.isInvertible() || std::abs(gram.determinant()) < 1e-12)
        throw SingularityError("degenerate metric on tangent space");
    return basis * lu.solve(covector);
}

double isometry_defect(const MetricField& g, const ManifoldModel& m, const AffineMap& deck,
                       const Vec& p) {
    const Mat b = m.tangent_basis(p);
    const Mat before = b.transpose() * g(p) * b;
    const Mat pushed = deck.linear * b;
    const Mat after = pushed.transpose() * g(deck.apply(p)) * pushed;
    return (after - before).cwiseAbs().maxCoeff();
}

}  // namespace kg
