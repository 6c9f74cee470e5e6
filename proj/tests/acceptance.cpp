// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.
#include "kg/critical.hpp"
#include "kg/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace kg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

// Tolerances pinned here; the detail line reports what was measured.
constexpr double kConversionTol = 1e-12;
constexpr double kGradientIdentityTol = 1e-6;
constexpr double kGradientFdTol = 1e-5;
constexpr double kFValueTol = 1e-6;
constexpr double kPeriodTol = 1e-6;
constexpr double kEnergyDriftTol = 1e-9;
constexpr double kLinearityTol = 0.10;
constexpr double kNegativeControlFloor = 0.1;

std::vector<GalleryEntry> timelike_entries() {
    std::vector<GalleryEntry> out;
    out.push_back(make_flat_lorentzian_torus(0.5, 1.0));
    out.push_back(make_klein_bottle());
    out.push_back(make_stationary_sphere(std::numbers::sqrt2));
    out.push_back(make_mapping_torus(1.0));
    out.push_back(make_commuting_family_example(1));
    out.push_back(make_commuting_family_example(2));
    return out;
}

Vec random_tangent(const ManifoldModel& m, const Vec& p, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    const Mat b = m.tangent_basis(p);
    Vec c(b.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n(rng);
    return b * c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

Outcome ac1_conversion() {
    Outcome r;
    double worst = 0.0;
    std::mt19937_64 rng(101);
    for (const auto& e : timelike_entries()) {
        const MetricField back = riemann_to_lorentz(lorentz_to_riemann(e.metric, e.killing.field), e.killing.field);
        for (int i = 0; i < 100; ++i) {
            const Vec p = e.manifold.sample(rng);
            const Vec v = random_tangent(e.manifold, p, rng), w = random_tangent(e.manifold, p, rng);
            const double err = std::abs(metric_eval(back, e.manifold, p, v, w) - metric_eval(e.metric, e.manifold, p, v, w)) /
                               std::max(1.0, v.norm() * w.norm());
            worst = std::max(worst, err);
        }
    }
    r.pass = worst <= kConversionTol;
    r.detail = "max |g' - g| = " + fmt(worst) + " (tol 1e-12)";
    return r;
}

Outcome ac2_gradient() {
    Outcome r;
    double identity = 0.0, fd_gap = 0.0;
    std::mt19937_64 rng(202);
    for (const auto& e : timelike_entries()) {
        const auto f = [&](const Vec& p) {
            return f_eval(e.metric, e.manifold, e.killing.field, e.manifold.project_point(p));
        };
        for (int i = 0; i < 200; ++i) {
            const Vec p = e.manifold.sample(rng);
            const Vec grad = grad_f(e.metric, e.manifold, e.killing.field, p);
            const Vec acc = killing_acceleration_gradient(e.metric, e.manifold, e.killing.field, p);
            identity = std::max(identity, (grad - acc).norm());
            const Mat b = e.manifold.tangent_basis(p);
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                const Vec v = b.col(j);
                const double h = 1e-5;
                const double fd = (f(p + h * v) - f(p - h * v)) / (2.0 * h);
                fd_gap = std::max(fd_gap, std::abs(metric_eval(e.metric, e.manifold, p, grad, v) - fd));
            }
        }
    }
    r.pass = identity <= kGradientIdentityTol && fd_gap <= kGradientFdTol;
    r.detail = "max |grad f + 2 nabla_K K| = " + fmt(identity) + " (tol 1e-6), max |df - FD| = " +
               fmt(fd_gap) + " (tol 1e-5)";
    return r;
}

Outcome ac3_stationary_sphere() {
    Outcome r;
    const auto e = make_stationary_sphere(std::numbers::sqrt2);
    const auto orbits = find_critical_orbits(e.metric, e.manifold, e.killing, {});
    if (orbits.size() != 2) return {false, std::to_string(orbits.size()) + " orbits, expected 2"};
    const double expected_f[] = {-2.0, -1.0};
    const CriticalKind expected_kind[] = {CriticalKind::Min, CriticalKind::Max};
    const double expected_period[] = {std::numbers::pi * std::numbers::sqrt2, 2.0 * std::numbers::pi};
    std::ostringstream os;
    for (int i = 0; i < 2; ++i) {
        const auto& o = orbits[i];
        const bool ok = std::abs(o.f_value - expected_f[i]) <= kFValueTol && o.classification == expected_kind[i] &&
                        o.geodesic_residual <= kGeodesicTol && o.period &&
                        std::abs(*o.period - expected_period[i]) <= kPeriodTol;
        r.pass = r.pass && ok;
        os << (i ? "; " : "") << "f=" << fmt(o.f_value) << ' ' << to_string(o.classification)
           << " T=" << (o.period ? fmt(*o.period) : "none") << " res=" << fmt(o.geodesic_residual);
    }
    r.detail = os.str();
    return r;
}

Outcome ac4_klein() {
    Outcome r;
    const auto e = make_klein_bottle();
    const auto orbits = find_critical_orbits(e.metric, e.manifold, e.killing, {});
    const bool marker = orbits.size() == 1 && orbits[0].classification == CriticalKind::DegenerateConstant &&
                        std::abs(orbits[0].f_value + 1.0) <= kFValueTol;
    int exceptional_ok = 0, generic_ok = 0;
    bool coords_ok = true;
    for (double x0 : {0.0, 0.5}) {
        const Vec p = (Vec(2) << x0, 0.0).finished();
        const auto cert = detect_period(e.manifold, e.killing.field, p, 5.0);
        if (cert && std::abs(cert->period - 1.0) <= kPeriodTol) ++exceptional_ok;
    }
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        double x0 = unit(rng);
        while (std::abs(x0 - 0.5) < 1e-3 || x0 < 1e-3 || x0 > 1.0 - 1e-3) x0 = unit(rng);
        const Vec p = (Vec(2) << x0, unit(rng)).finished();
        const auto cert = detect_period(e.manifold, e.killing.field, p, 5.0);
        if (cert && std::abs(cert->period - 2.0) <= kPeriodTol) ++generic_ok;
        const double c = klein_orbit_coordinate(x0);
        coords_ok = coords_ok && c >= 0.0 && c <= 0.5;
    }
    r.pass = marker && exceptional_ok == 2 && generic_ok == 20 && coords_ok;
    r.detail = std::string("degenerate marker ") + (marker ? "yes" : "no") + ", period 1 at " +
               std::to_string(exceptional_ok) + "/2 exceptional, period 2 at " + std::to_string(generic_ok) +
               "/20 random, orbit coordinates in [0, 1/2]: " + (coords_ok ? "yes" : "no");
    return r;
}

Outcome ac5_mapping_torus() {
    Outcome r;
    const auto e = make_mapping_torus(1.0);
    std::vector<Vec> starts{(Vec(4) << 0, 0, 1, 0).finished()};
    std::mt19937_64 rng(505);
    for (int i = 0; i < 20; ++i) starts.push_back(e.manifold.sample(rng));
    int closed = 0;
    bool pole_ok = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto cert = detect_period(e.manifold, e.killing.field, starts[i], 50.0);
        if (!cert) continue;
        ++closed;
        if (i == 0 && std::abs(cert->period - 1.0) <= kPeriodTol) pole_ok = true;
    }
    r.pass = closed == 1 && pole_ok;
    r.detail = std::to_string(closed) + " closed orbit(s) among 21 starts, pole period 1: " + (pole_ok ? "yes" : "no");
    return r;
}

Outcome ac6_closed_approximation() {
    Outcome r;
    EntryParams params;
    params.alpha = std::numbers::sqrt2;
    const auto report = cmd_approximate("stationary-s3", params, 5, {});
    const auto& a = *report.approximation;
    const auto& c = a.certificate;
    const std::vector<Fraction> expected{{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}};
    const bool convergents = c.convergents == expected;
    bool linear = true, decreasing = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < c.sup_field_gaps.size(); ++i) {
        const double ratio = std::abs(c.sup_field_gaps[i] / c.field_gap_bounds[i] - 1.0);
        worst_ratio = std::max(worst_ratio, ratio);
        linear = linear && ratio <= kLinearityTol;
        if (i > 0) decreasing = decreasing && c.sup_field_gaps[i] < c.sup_field_gaps[i - 1];
    }
    int min_certified = 1 << 30;
    bool all_close = true;
    std::size_t lines = 0;
    for (const auto& x : a.approximants) {
        min_certified = std::min(min_certified, x.certified_orbits);
        for (const auto& p : x.closure_periods) {
            ++lines;
            all_close = all_close && p.has_value();
        }
    }
    r.pass = convergents && c.gaps_valid() && decreasing && linear && min_certified >= 2 && all_close &&
             a.approximants.size() == 5;
    r.detail = std::string("convergents exact: ") + (convergents ? "yes" : "no") +
               ", gaps < 1/q^2: " + (c.gaps_valid() ? "yes" : "no") + ", sup gaps decreasing: " +
               (decreasing ? "yes" : "no") + ", linearity off by " + fmt(100.0 * worst_ratio) +
               "% (tol 10%), min certified orbits " + std::to_string(min_certified) + ", " +
               std::to_string(lines) + " sampled lines closed: " + (all_close ? "yes" : "no");
    return r;
}

Outcome ac7_energy() {
    Outcome r;
    double worst = 0.0;
    int runs = 0;
    for (const auto& e : timelike_entries()) {
        std::vector<Vec> starts = e.scan_starts;
        if (e.name == "stationary-s3") starts = {(Vec(4) << 1, 0, 0, 0).finished(), (Vec(4) << 0, 0, 1, 0).finished()};
        if (starts.empty()) starts.push_back(Vec::Zero(e.manifold.ambient_dim()));
        for (const Vec& p : starts) {
            const auto cert = detect_period(e.manifold, e.killing.field, p, 20.0);
            if (!cert) continue;
            FlowOptions o;
            o.manifold = &e.manifold;
            o.metric = &e.metric;
            const auto c = shoot_geodesic(e.metric, e.manifold, p, e.killing(p), cert->period, o);
            worst = std::max(worst, c.energy_drift);
            ++runs;
        }
    }
    r.pass = runs > 0 && worst <= kEnergyDriftTol;
    r.detail = std::to_string(runs) + " geodesics over one period, max drift " + fmt(worst) + " (tol 1e-9)";
    return r;
}

Outcome ac8_commuting_family() {
    Outcome r;
    const auto e = make_commuting_family_example(2);
    std::mt19937_64 rng(808);
    double gram_err = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Mat a = gram_matrix(e.metric, e.manifold, *e.family, e.manifold.sample(rng));
        gram_err = std::max(gram_err, (a + Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
    const Vec p0 = (Vec(4) << 0.2, 0.7, 0.0, 0.0).finished();
    const auto cert = detect_period(e.manifold, e.killing.field, p0, 5.0);
    if (!cert) return {false, "base orbit did not close"};
    FlowOptions o;
    o.manifold = &e.manifold;
    o.metric = &e.metric;
    const auto gamma = shoot_geodesic(e.metric, e.manifold, p0, e.killing(p0), cert->period, o);
    std::vector<CurveSample> curves;
    double worst_res = 0.0, worst_close = 0.0;
    for (double t : {0.0, 0.15, 0.3, 0.45, 0.6}) {
        curves.push_back(translate_geodesic(*e.family, 1, gamma, t, e.manifold, &e.metric));
        const auto& c = curves.back();
        worst_res = std::max(worst_res, geodesic_residual(e.metric, e.manifold, c));
        worst_close = std::max(worst_close, e.manifold.quotient_distance(c.points.front(), c.points.back()).first);
    }
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = i + 1; j < curves.size(); ++j)
            min_sep = std::min(min_sep, hausdorff_distance(e.manifold, curves[i], curves[j]));
    r.pass = gram_err <= 1e-12 && min_sep > kDistinctCurveTol && worst_res <= kGeodesicTol && worst_close <= kPeriodTol;
    r.detail = "|A + I| = " + fmt(gram_err) + ", min pairwise Hausdorff " + fmt(min_sep) + " (> 1e-3), max residual " +
               fmt(worst_res) + " (tol 1e-5), closure gap " + fmt(worst_close);
    return r;
}

Outcome ac9_negative_control() {
    Outcome r;
    const auto e = make_flat_lorentzian_torus(0.0, 1.0);
    const VectorField bent = [](const Vec& p) {
        return (Vec(2) << 0.2 * std::sin(2.0 * std::numbers::pi * p(0)), 1.0).finished();
    };
    const KillingField k = certify_killing(e.metric, e.manifold, {bent, std::nullopt, nullptr, "perturbed"});
    r.pass = k.max_residual >= kNegativeControlFloor && !k.certified;
    r.detail = "residual " + fmt(k.max_residual) + " (>= 0.1), certified: " + (k.certified ? "yes" : "no");
    return r;
}

std::string run_cli(const std::string& args) {
    const std::string cmd = std::string(KGEO_PATH) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    if (pclose(pipe) != 0) return {};
    return out;
}

Outcome ac10_determinism() {
    Outcome r;
    const std::string args = "analyze stationary-s3 --alpha sqrt2 --seed 42";
    const std::string a = run_cli(args), b = run_cli(args);
    if (a.empty() || b.empty()) return {false, "CLI run failed"};
    auto strip = [](const std::string& text) {
        auto j = nlohmann::json::parse(text);
        j.erase("runtime_ms");
        return j.dump();
    };
    const auto runtime_line = [](const std::string& text) {
        std::string out;
        std::istringstream is(text);
        for (std::string line; std::getline(is, line);)
            if (line.find("\"runtime_ms\"") == std::string::npos) out += line + '\n';
        return out;
    };
    const bool bytes = runtime_line(a) == runtime_line(b);
    r.pass = bytes && strip(a) == strip(b);
    r.detail = std::string("two runs byte-identical except runtime_ms: ") + (bytes ? "yes" : "no");
    return r;
}

struct Criterion {
    const char* id;
    const char* name;
    double budget_s;  // 0 when the criterion has no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "conversion involution", 1.0, ac1_conversion},
        {"AC2", "gradient identity", 5.0, ac2_gradient},
        {"AC3", "stationary S3 critical orbits", 30.0, ac3_stationary_sphere},
        {"AC4", "Klein bottle fiber scan", 10.0, ac4_klein},
        {"AC5", "mapping torus single closed orbit", 30.0, ac5_mapping_torus},
        {"AC6", "closed approximation", 60.0, ac6_closed_approximation},
        {"AC7", "energy conservation", 0.0, ac7_energy},
        {"AC8", "commuting family translates", 0.0, ac8_commuting_family},
        {"AC9", "negative control", 0.0, ac9_negative_control},
        {"AC10", "determinism", 0.0, ac10_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << c.id << ' ' << (pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << " ["
                  << fmt(secs) << " s";
        if (c.budget_s > 0.0) std::cout << " < " << c.budget_s << " s";
        std::cout << "]\n";
    }
    return failed == 0 ? 0 : 1;
}
