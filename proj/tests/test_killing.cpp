#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kg/gallery.hpp"

#include <cmath>

using namespace kg;

namespace {

ManifoldModel round_s2() {
    ManifoldModel s2(ManifoldKind::Embedded, 3, 2);
    s2.with_constraint(sphere_constraint(3, 0, 3));
    s2.with_sampler([](std::mt19937_64& rng) {
        std::normal_distribution<double> n;
        Vec p(3);
        for (int i = 0; i < 3; ++i) p(i) = n(rng);
        return Vec(p.normalized());
    });
    return s2;
}

const MetricField euclid3 = MetricField::constant(Mat::Identity(3, 3), {3, 0}, MetricRole::Riemannian);

}  // namespace

TEST_CASE("rotation is Killing on the round sphere, the conformal field is not") {
    const auto s2 = round_s2();
    const VectorField rot = [](const Vec& p) { return (Vec(3) << -p(1), p(0), 0.0).finished(); };
    // Tangential part of e_z: gradient of the height function.
    const VectorField conf = [](const Vec& p) { return Vec((Vec(3) << 0, 0, 1).finished() - p(2) * p); };
    const Vec p = (Vec(3) << 0.48, 0.6, 0.64).finished();
    CHECK(killing_residual(euclid3, s2, rot, p) < 1e-9);
    CHECK(killing_residual(euclid3, s2, conf, p) > 0.1);

    const KillingField good = certify_killing(euclid3, s2, {rot, std::nullopt, nullptr, "killing"});
    CHECK(good.certified);
    CHECK(good.label == "killing");
    const KillingField bad = certify_killing(euclid3, s2, {conf, std::nullopt, nullptr, "killing"});
    CHECK_FALSE(bad.certified);
    CHECK(bad.label == "uncertified");
    CHECK(bad.max_residual > 0.1);
}

TEST_CASE("Lorentz and Riemann conversions are inverse") {
    const auto e = make_stationary_sphere(std::sqrt(2.0));
    const MetricField gr = lorentz_to_riemann(e.metric, e.killing.field);
    const MetricField back = riemann_to_lorentz(gr, e.killing.field);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const Vec p = e.manifold.sample(rng);
        CHECK((back(p) - e.metric(p)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(tangent_signature(gr, e.manifold, p) == Signature{3, 0});
    }
}

TEST_CASE("conversion preconditions") {
    const auto g = MetricField::constant((Mat(2, 2) << 1, 0, 0, -1).finished(), {1, 1},
                                         MetricRole::Lorentzian);
    const VectorField spacelike = [](const Vec&) { return (Vec(2) << 1, 0).finished(); };
    CHECK_THROWS_AS(lorentz_to_riemann(g, spacelike)(Vec::Zero(2)), DomainError);
    const VectorField zero = [](const Vec&) { return Vec::Zero(2).eval(); };
    CHECK_THROWS_AS(riemann_to_lorentz(euclid3, zero)(Vec::Zero(3)), SingularityError);
}

TEST_CASE("lie bracket of d/dx and x d/dy") {
    const VectorField dx = [](const Vec&) { return (Vec(2) << 1, 0).finished(); };
    const VectorField xdy = [](const Vec& p) { return (Vec(2) << 0, p(0)).finished(); };
    CHECK((lie_bracket(dx, xdy, (Vec(2) << 0.3, 0.2).finished()) - (Vec(2) << 0, 1).finished()).norm() < 1e-9);
}

TEST_CASE("torus family on the stationary sphere commutes") {
    const auto e = make_stationary_sphere(std::sqrt(2.0));
    REQUIRE(e.family);
    CHECK(e.family->commuting);
    CHECK(e.family->max_bracket < kBracketTol);
    CHECK(e.family->period == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("gram matrix on the T4 family is -I") {
    const auto e = make_commuting_family_example(2);
    const Mat a = gram_matrix(e.metric, e.manifold, *e.family, Vec::Zero(4));
    CHECK((a + Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("combine_family preconditions") {
    const auto e = make_commuting_family_example(2);
    CHECK_THROWS_AS(combine_family(e.family, Vec::Zero(2)), DomainError);
    CHECK_THROWS_AS(combine_family(e.family, Vec::Ones(3)), DomainError);
    const KillingField k = combine_family(e.family, (Vec(2) << 2, 3).finished());
    CHECK((k(Vec::Zero(4)) - (Vec(4) << 0, 0, 2, 3).finished()).norm() < 1e-15);
    auto loose = std::make_shared<KillingFamily>(*e.family);
    loose->commuting = false;
    CHECK_THROWS_AS(combine_family(loose, Vec::Ones(2)), DomainError);
}
