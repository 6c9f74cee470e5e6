#include "kg/gallery.hpp"

#include "kg/closed_approx.hpp"

#include <cmath>
#include <numbers>

namespace kg {

namespace {

VectorField constant_field(Vec v) {
    return [v = std::move(v)](const Vec&) { return v; };
}

Vec unit(int dim, int i) { return Vec::Unit(dim, i); }

AffineMap translation(int dim, int axis) { return {Mat::Identity(dim, dim), unit(dim, axis)}; }

// Integer lattice quotient R^n / Z^n with one translation generator per axis.
ManifoldModel unit_lattice_quotient(int dim, const std::vector<std::string>& names) {
    ManifoldModel m(ManifoldKind::FlatQuotient, dim, dim);
    for (int i = 0; i < dim; ++i) m.with_generator(names[i], translation(dim, i));
    m.with_box(Vec::Zero(dim), Vec::Ones(dim));
    m.with_canonicalizer([dim](const Vec& p) {
        DeckElement e = identity_element(dim);
        for (int i = 0; i < dim; ++i) {
            const int shift = static_cast<int>(std::floor(p(i)));
            if (shift == 0) continue;
            e.word.push_back({i, -shift});
            e.map.offset(i) -= shift;
        }
        return e;
    });
    return m;
}

KillingField certified(const MetricField& g, const ManifoldModel& m, KillingField k) {
    return certify_killing(g, m, std::move(k), 200);
}

Vec gaussian_sphere_point(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = normal(rng);
    return x.normalized();
}

}  // namespace

GalleryEntry make_flat_lorentzian_torus(double a, double b) {
    if (a == 0.0 && b == 0.0) throw DomainError("slope must be nonzero");
    ManifoldModel m = unit_lattice_quotient(2, {"ex", "et"});
    Mat form(2, 2);
    form << 1, 0, 0, -1;
    MetricField g = MetricField::constant(form, {1, 1}, MetricRole::Lorentzian);

    std::vector<KillingField> members(2);
    members[0] = {constant_field(unit(2, 0)), Vec::Unit(2, 0), nullptr, "d/dx"};
    members[1] = {constant_field(unit(2, 1)), Vec::Unit(2, 1), nullptr, "d/dt"};
    auto family = std::make_shared<const KillingFamily>(make_family(m, members, 1.0));
    Vec gen(2);
    gen << a, b;
    KillingField k = certified(g, m, combine_family(family, gen, "killing"));

    GalleryEntry e{"flat-torus", std::move(m), std::move(g), std::move(k), family, {}, {}};
    e.expected.degenerate_constant = true;
    e.expected.critical_f_values = {a * a - b * b};
    const bool periodic = a == 0.0 || b == 0.0 || detect_rational(b / a).has_value();
    if (periodic) {
        // Period is the smallest s with (s a, s b) in Z^2.
        double period = 0.0;
        if (a == 0.0) period = 1.0 / std::abs(b);
        else if (b == 0.0) period = 1.0 / std::abs(a);
        else period = static_cast<double>(detect_rational(b / a)->q) / std::abs(a);
        e.expected.periods = {period};
    }
    e.expected.notes = periodic ? "every integral curve is a periodic geodesic"
                                : "irrational slope: no periodic integral curve";
    for (double x0 : {0.0, 0.25, 0.5, 0.75})
        e.scan_starts.push_back((Vec(2) << x0, 0.0).finished());
    return e;
}

GalleryEntry make_klein_bottle() {
    ManifoldModel m(ManifoldKind::FlatQuotient, 2, 2);
    m.with_generator("a", translation(2, 0));
    Mat flip(2, 2);
    flip << -1, 0, 0, 1;
    m.with_generator("b", {flip, (Vec(2) << 1.0, 1.0).finished()});
    m.with_box(Vec::Zero(2), Vec::Ones(2));
    const AffineMap a_map = translation(2, 0);
    const AffineMap b_map{flip, (Vec(2) << 1.0, 1.0).finished()};
    m.with_canonicalizer([a_map, b_map](const Vec& p) {
        DeckElement e = identity_element(2);
        const int k = static_cast<int>(std::floor(p(1)));
        if (k != 0) e = compose({{{1, -k}}, b_map.power(-k)}, e);
        const Vec q = e.map.apply(p);
        const int s = static_cast<int>(std::floor(q(0)));
        if (s != 0) e = compose({{{0, -s}}, a_map.power(-s)}, e);
        return e;
    });

    Mat form(2, 2);
    form << 1, 0, 0, -1;
    MetricField g = MetricField::constant(form, {1, 1}, MetricRole::Lorentzian);
    KillingField k = certified(g, m, {constant_field(unit(2, 1)), std::nullopt, nullptr, "killing"});

    GalleryEntry e{"klein-bottle", std::move(m), std::move(g), std::move(k), nullptr, {}, {}};
    e.expected.degenerate_constant = true;
    e.expected.critical_f_values = {-1.0};
    e.expected.periods = {1.0, 2.0};
    e.expected.notes = "exceptional orbits x0 in {0, 1/2} have period 1, all others period 2";
    for (int i = 0; i <= 10; ++i) e.scan_starts.push_back((Vec(2) << 0.05 * i, 0.0).finished());
    return e;
}

double klein_orbit_coordinate(double x0) {
    const double r = x0 - std::floor(x0);
    return std::min(r, 1.0 - r);
}

GalleryEntry make_stationary_sphere(double alpha) {
    ManifoldModel m(ManifoldKind::Embedded, 4, 3);
    m.with_constraint(sphere_constraint(4, 0, 4));
    m.with_box(-Vec::Ones(4), Vec::Ones(4));
    m.with_sampler([](std::mt19937_64& rng) { return gaussian_sphere_point(rng, 4); });

    std::vector<KillingField> members(2);
    members[0] = {[](const Vec& x) { return (Vec(4) << -x(1), x(0), 0.0, 0.0).finished(); },
                  Vec::Unit(2, 0), nullptr, "iz"};
    members[1] = {[](const Vec& x) { return (Vec(4) << 0.0, 0.0, -x(3), x(2)).finished(); },
                  Vec::Unit(2, 1), nullptr, "iw"};
    auto family = std::make_shared<const KillingFamily>(
        make_family(m, members, 2.0 * std::numbers::pi));
    Vec gen(2);
    gen << 1.0, alpha;
    KillingField k = combine_family(family, gen, "killing");

    const MetricField round = MetricField::constant(Mat::Identity(4, 4), {3, 0}, MetricRole::Riemannian);
    MetricField g = riemann_to_lorentz(round, k.field);
    // Evaluate on both singular circles of the torus action so a vanishing
    // field is rejected at construction.
    (void)g((Vec(4) << 1, 0, 0, 0).finished());
    (void)g((Vec(4) << 0, 0, 1, 0).finished());
    k = certified(g, m, std::move(k));

    GalleryEntry e{"stationary-s3", std::move(m), std::move(g), std::move(k), family, {}, {}};
    const double a2 = alpha * alpha;
    if (std::abs(a2 - 1.0) < 1e-15) {
        e.expected.degenerate_constant = true;
        e.expected.critical_f_values = {-1.0};
    } else {
        e.expected.critical_f_values = {std::min(-1.0, -a2), std::max(-1.0, -a2)};
        e.expected.orbit_count = 2;
        const double p1 = 2.0 * std::numbers::pi;
        const double p2 = 2.0 * std::numbers::pi / std::abs(alpha);
        e.expected.periods = a2 > 1.0 ? std::vector<double>{p2, p1} : std::vector<double>{p1, p2};
    }
    e.expected.notes = detect_rational(alpha) ? "rational alpha: every integral line is periodic"
                                              : "irrational alpha: exactly two periodic integral lines";
    return e;
}

GalleryEntry make_mapping_torus(double theta) {
    if (detect_rational(theta / std::numbers::pi))
        throw DomainError("theta/pi is rational: periodic points exist");

    ManifoldModel m(ManifoldKind::ProductQuotient, 4, 3);
    m.with_constraint(sphere_constraint(4, 0, 3));
    Mat antipode = Mat::Identity(4, 4);
    antipode.topLeftCorner(3, 3) *= -1.0;
    Mat rot = Mat::Identity(4, 4);
    rot(0, 0) = std::cos(theta);
    rot(0, 1) = -std::sin(theta);
    rot(1, 0) = std::sin(theta);
    rot(1, 1) = std::cos(theta);
    const AffineMap sigma{antipode, Vec::Zero(4)};
    const AffineMap tau{rot, unit(4, 3)};
    m.with_generator("sigma", sigma);
    m.with_generator("tau", tau);
    Vec lo(4), hi(4);
    lo << -1, -1, -1, 0;
    hi << 1, 1, 1, 1;
    m.with_box(lo, hi);
    m.with_canonicalizer([sigma, tau](const Vec& p) {
        DeckElement e = identity_element(4);
        const int k = static_cast<int>(std::floor(p(3)));
        if (k != 0) e = compose({{{1, -k}}, tau.power(-k)}, e);
        const Vec q = e.map.apply(p);
        if (q(2) < 0.0) e = compose({{{0, 1}}, sigma}, e);
        return e;
    });
    m.with_sampler([](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> unit_t(0.0, 1.0);
        Vec x(4);
        x.head(3) = gaussian_sphere_point(rng, 3);
        x(3) = unit_t(rng);
        return x;
    });

    Mat form = Mat::Identity(4, 4);
    form(3, 3) = -1.0;
    MetricField g = MetricField::constant(form, {2, 1}, MetricRole::Lorentzian);
    KillingField k = certified(g, m, {constant_field(unit(4, 3)), std::nullopt, nullptr, "killing"});

    GalleryEntry e{"mapping-torus", std::move(m), std::move(g), std::move(k), nullptr, {}, {}};
    e.expected.degenerate_constant = true;
    e.expected.critical_f_values = {-1.0};
    e.expected.orbit_count = 1;
    e.expected.periods = {1.0};
    e.expected.notes = "exactly one closed integral curve, through the pole class";
    e.scan_starts.push_back((Vec(4) << 0, 0, 1, 0).finished());
    e.scan_starts.push_back((Vec(4) << 1, 0, 0, 0).finished());
    e.scan_starts.push_back((Vec(4) << 0, 0.6, 0.8, 0).finished());
    return e;
}

GalleryEntry make_commuting_family_example(int m_count) {
    if (m_count != 1 && m_count != 2) throw DomainError("commuting family example supports m in {1, 2}");
    ManifoldModel m = unit_lattice_quotient(4, {"ex", "ey", "et1", "et2"});
    Mat form = Mat::Identity(4, 4);
    form(3, 3) = -1.0;
    if (m_count == 2) form(2, 2) = -1.0;
    const Signature sig{4 - m_count, m_count};
    MetricField g = MetricField::constant(
        form, sig, m_count == 1 ? MetricRole::Lorentzian : MetricRole::SemiRiemannian);

    // m = 2: time axes t1, t2 (coordinates 2, 3). m = 1: the single time axis.
    std::vector<KillingField> members;
    const std::vector<int> axes = m_count == 2 ? std::vector<int>{2, 3} : std::vector<int>{3};
    for (std::size_t i = 0; i < axes.size(); ++i)
        members.push_back(certified(g, m,
                                    {constant_field(unit(4, axes[i])),
                                     Vec::Unit(static_cast<Eigen::Index>(axes.size()), static_cast<Eigen::Index>(i)),
                                     nullptr, "d/dt" + std::to_string(i + 1)}));
    auto family = std::make_shared<const KillingFamily>(make_family(m, members, 1.0));
    KillingField k = certified(g, m, combine_family(family, Vec::Unit(m_count, 0), "killing"));

    GalleryEntry e{"commuting-t4", std::move(m), std::move(g), std::move(k), family, {}, {}};
    e.expected.degenerate_constant = true;
    e.expected.critical_f_values = {-1.0};
    e.expected.periods = {1.0};
    e.expected.notes = "Gram matrix -I; flow translates of closed geodesics are closed geodesics";
    e.scan_starts.push_back(Vec::Zero(4));
    return e;
}

std::vector<std::string> gallery_names() {
    return {"flat-torus", "klein-bottle", "stationary-s3", "mapping-torus", "commuting-t4"};
}

}  // namespace kg
