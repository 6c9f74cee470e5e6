#include "kg/killing.hpp"

#include <cmath>

namespace kg {

double killing_residual(const MetricField& g, const ManifoldModel& m, const VectorField& k,
                        const Vec& p) {
    const Mat probes = m.tangent_basis(p);
    const Mat form = g(p);
    const Eigen::Index n = probes.cols();
    std::vector<Vec> nabla(n);
    for (Eigen::Index i = 0; i < n; ++i) nabla[i] = covariant_derivative(g, m, k, probes.col(i), p);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double sym = nabla[i].dot(form * probes.col(j)) + nabla[j].dot(form * probes.col(i));
            worst = std::max(worst, std::abs(sym));
        }
    return worst;
}

KillingField certify_killing(const MetricField& g, const ManifoldModel& m, KillingField k,
                             int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) worst = std::max(worst, killing_residual(g, m, k.field, m.sample(rng)));
    k.max_residual = worst;
    k.certified = worst <= kKillingTol;
    if (!k.certified && k.label == "killing") k.label = "uncertified";
    return k;
}

MetricField lorentz_to_riemann(const MetricField& g, const VectorField& k) {
    auto eval = [g, k](const Vec& p) -> Mat {
        const Mat a = g(p);
        const Vec kp = k(p);
        const Vec gk = a * kp;
        const double f = kp.dot(gk);
        if (f >= -1e-10) throw DomainError("field not timelike here");
        return a - (2.0 / f) * gk * gk.transpose();
    };
    Signature s = g.signature();
    return MetricField(eval, {s.n_plus + s.n_minus, 0}, MetricRole::Riemannian);
}

MetricField riemann_to_lorentz(const MetricField& g_r, const VectorField& k) {
    auto eval = [g_r, k](const Vec& p) -> Mat {
        const Vec kp = k(p);
        if (kp.norm() < 1e-12) throw SingularityError("field vanishes");
        const Mat a = g_r(p);
        const Vec gk = a * kp;
        const double f = kp.dot(gk);
        return a - (2.0 / f) * gk * gk.transpose();
    };
    Signature s = g_r.signature();
    return MetricField(eval, {s.n_plus - 1, s.n_minus + 1}, MetricRole::Lorentzian);
}

Vec lie_bracket(const VectorField& x, const VectorField& y, const Vec& p) {
    return directional_derivative(y, p, x(p)) - directional_derivative(x, p, y(p));
}

KillingFamily make_family(const ManifoldModel& m, std::vector<KillingField> members,
                          double period, int samples, std::uint64_t seed) {
    KillingFamily fam;
    fam.members = std::move(members);
    fam.period = period;
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Vec p = m.sample(rng);
        for (std::size_t i = 0; i < fam.members.size(); ++i)
            for (std::size_t j = i + 1; j < fam.members.size(); ++j)
                worst = std::max(worst,
                                 lie_bracket(fam.members[i].field, fam.members[j].field, p).norm());
    }
    fam.max_bracket = worst;
    fam.commuting = worst <= kBracketTol;
    return fam;
}

Mat gram_matrix(const MetricField& g, const ManifoldModel& m, const KillingFamily& family,
                const Vec& q) {
    m.require_on_manifold(q);
    const Eigen::Index n = static_cast<Eigen::Index>(family.members.size());
    Mat fields(q.size(), n);
    for (Eigen::Index i = 0; i < n; ++i) fields.col(i) = family.members[i](q);
    Mat a = fields.transpose() * g(q) * fields;
    return 0.5 * (a + a.transpose());
}

KillingField combine_family(std::shared_ptr<const KillingFamily> family, const Vec& x,
                            std::string label) {
    if (!family) throw DomainError("no family");
    if (!family->commuting) throw DomainError("family is not commuting");
    if (x.size() != static_cast<Eigen::Index>(family->members.size()))
        throw DomainError("coefficient vector size mismatch");
    if (x.norm() == 0.0) throw DomainError("zero coefficient vector");
    KillingField out;
    out.field = [family, x](const Vec& p) {
        Vec v = Vec::Zero(p.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x(i) != 0.0) v += x(i) * family->members[i](p);
        return v;
    };
    out.generator = x;
    out.torus = std::move(family);
    out.label = std::move(label);
    return out;
}

}  // namespace kg
