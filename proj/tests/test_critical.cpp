#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kg/critical.hpp"
#include "kg/gallery.hpp"

#include <cmath>
#include <cstdlib>

using namespace kg;

namespace {

Vec v4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }

// f = -|K|^2 for the metric built from the round one and K.
double f_closed(const Vec& p, double alpha) {
    const double z2 = p(0) * p(0) + p(1) * p(1), w2 = p(2) * p(2) + p(3) * p(3);
    return -(z2 + alpha * alpha * w2);
}

}  // namespace

TEST_CASE("energy matches the closed form on the stationary sphere") {
    const double alpha = std::sqrt(2.0);
    const auto e = make_stationary_sphere(alpha);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const Vec p = e.manifold.sample(rng);
        CHECK(f_eval(e.metric, e.manifold, e.killing.field, p) == doctest::Approx(f_closed(p, alpha)).epsilon(1e-12));
    }
}

TEST_CASE("grad f against finite differences and -2 nabla_K K") {
    const auto e = make_stationary_sphere(std::sqrt(2.0));
    std::mt19937_64 rng(12);
    const auto f = [&](const Vec& p) { return f_eval(e.metric, e.manifold, e.killing.field, e.manifold.project_point(p)); };
    for (int i = 0; i < 20; ++i) {
        const Vec p = e.manifold.sample(rng);
        const Vec grad = grad_f(e.metric, e.manifold, e.killing.field, p);
        CHECK((grad - killing_acceleration_gradient(e.metric, e.manifold, e.killing.field, p)).norm() < 1e-6);
        const Mat b = e.manifold.tangent_basis(p);
        for (int j = 0; j < b.cols(); ++j) {
            const Vec v = b.col(j);
            const double h = 1e-5;
            const double fd = (f(p + h * v) - f(p - h * v)) / (2 * h);
            CHECK(std::abs(metric_eval(e.metric, e.manifold, p, grad, v) - fd) < 1e-5);
        }
    }
}

TEST_CASE("classification at the two circles") {
    const auto e = make_stationary_sphere(std::sqrt(2.0));
    const auto c1 = classify_critical(e.metric, e.manifold, e.killing.field, v4(1, 0, 0, 0));
    CHECK(c1.kind == CriticalKind::Max);
    CHECK_FALSE(c1.degenerate);
    const auto c2 = classify_critical(e.metric, e.manifold, e.killing.field, v4(0, 0, 1, 0));
    CHECK(c2.kind == CriticalKind::Min);
    const auto kb = make_klein_bottle();
    CHECK_THROWS_AS(classify_critical(kb.metric, kb.manifold, kb.killing.field, Vec::Zero(2)), DomainError);
}

TEST_CASE("search finds exactly the two circles") {
    const auto e = make_stationary_sphere(std::sqrt(2.0));
    SearchOptions o;
    o.budget = 24;
    const auto orbits = find_critical_orbits(e.metric, e.manifold, e.killing, o);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].f_value == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(orbits[1].f_value == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(orbits[0].classification == CriticalKind::Min);
    CHECK(orbits[1].classification == CriticalKind::Max);
    REQUIRE(orbits[0].period);
    CHECK(*orbits[0].period == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("search result does not depend on the worker count") {
    const auto e = make_stationary_sphere(std::sqrt(3.0));
    SearchOptions o;
    o.budget = 16;
    o.threads = 1;
    const auto a = find_critical_orbits(e.metric, e.manifold, e.killing, o);
    o.threads = 4;
    const auto b = find_critical_orbits(e.metric, e.manifold, e.killing, o);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].f_value == b[i].f_value);
        CHECK(a[i].representative == b[i].representative);
    }
}

TEST_CASE("constant energy yields the degenerate marker") {
    const auto e = make_klein_bottle();
    const auto orbits = find_critical_orbits(e.metric, e.manifold, e.killing);
    REQUIRE(orbits.size() == 1);
    CHECK(orbits[0].classification == CriticalKind::DegenerateConstant);
    CHECK(orbits[0].degenerate);
    CHECK(orbits[0].f_value == doctest::Approx(-1.0));
}

TEST_CASE("unreachable gradient tolerance is a search failure") {
    const auto e = make_stationary_sphere(std::sqrt(2.0));
    SearchOptions o;
    o.budget = 4;
    o.grad_tol = -1.0;
    CHECK_THROWS_AS(find_critical_orbits(e.metric, e.manifold, e.killing, o), SearchFailure);
}

TEST_CASE("KG_THREADS caps the worker count") {
    setenv("KG_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    CHECK(worker_count(8) == 1);
    unsetenv("KG_THREADS");
    CHECK(worker_count() >= 1);
}
