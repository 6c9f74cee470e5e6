#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kg/integrator.hpp"

#include <cmath>

using namespace kg;

namespace {

// y'' = -y as a first-order system.
const OdeRhs oscillator = [](double, const Vec& y) { return (Vec(2) << y(1), -y(0)).finished(); };

}  // namespace

TEST_CASE("oscillator returns after a full period") {
    const Vec y0 = (Vec(2) << 1, 0).finished();
    const DenseSolution sol = integrate(oscillator, 0.0, y0, 2.0 * M_PI);
    CHECK(sol.t_end() == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
    CHECK((sol.states().back() - y0).norm() < 1e-8);
}

TEST_CASE("dense output interpolates between steps") {
    const Vec y0 = (Vec(2) << 1, 0).finished();
    IntegratorOptions opts;
    opts.max_step = 0.2;
    const DenseSolution sol = integrate(oscillator, 0.0, y0, 3.0, opts);
    for (double t : {0.0, 0.013, 0.77, 1.5, 2.999, 3.0}) {
        CHECK(std::abs(sol.state(t)(0) - std::cos(t)) < 1e-7);
        CHECK(std::abs(sol.slope(t)(0) + std::sin(t)) < 1e-6);
    }
}

TEST_CASE("backward integration") {
    const Vec y0 = (Vec(1) << 1.0).finished();
    const OdeRhs decay = [](double, const Vec& y) { return Vec(-y); };
    const DenseSolution sol = integrate(decay, 0.0, y0, -2.0);
    CHECK(sol.t_end() == doctest::Approx(-2.0));
    CHECK(sol.states().back()(0) == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
    CHECK(sol.state(-1.0)(0) == doctest::Approx(std::exp(1.0)).epsilon(1e-7));
}

TEST_CASE("zero interval gives a single state") {
    const Vec y0 = (Vec(2) << 1, 0).finished();
    const DenseSolution sol = integrate(oscillator, 1.0, y0, 1.0);
    CHECK(sol.times().size() == 1);
    CHECK(sol.state(1.0) == y0);
}

TEST_CASE("projection is applied to accepted states") {
    const Vec y0 = (Vec(2) << 1, 0).finished();
    IntegratorOptions opts;
    opts.project = [](double, const Vec& y) { return Vec(y.normalized()); };
    const OdeRhs rot = [](double, const Vec& y) { return (Vec(2) << -y(1), y(0)).finished(); };
    const DenseSolution sol = integrate(rot, 0.0, y0, 10.0, opts);
    for (const Vec& y : sol.states()) CHECK(std::abs(y.norm() - 1.0) < 1e-15);
}

TEST_CASE("step collapse throws") {
    IntegratorOptions opts;
    opts.min_step = 0.5;
    opts.initial_step = 1.0;
    opts.max_step = 1.0;
    const OdeRhs stiff = [](double, const Vec& y) { return Vec(-1e4 * y); };
    CHECK_THROWS_AS(integrate(stiff, 0.0, Vec::Ones(1), 10.0, opts), StiffnessError);
}
