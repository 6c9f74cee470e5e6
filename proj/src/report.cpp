#include "kg/report.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kg {

using nlohmann::json;

GalleryEntry make_entry(const std::string& name, const EntryParams& p) {
    if (name == "flat-torus") return make_flat_lorentzian_torus(p.slope_a, p.slope_b);
    if (name == "klein-bottle") return make_klein_bottle();
    if (name == "stationary-s3") return make_stationary_sphere(p.alpha);
    if (name == "mapping-torus") return make_mapping_torus(p.theta);
    if (name == "commuting-t4") return make_commuting_family_example(p.family_size);
    throw DomainError("unknown gallery entry: " + name);
}

double parse_real(const std::string& text) {
    std::string t = text;
    double sign = 1.0;
    if (!t.empty() && t.front() == '-') {
        sign = -1.0;
        t.erase(0, 1);
    }
    if (t == "sqrt2") return sign * std::numbers::sqrt2;
    if (t == "golden") return sign * std::numbers::phi;
    if (t == "pi") return sign * std::numbers::pi;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw DomainError("not a number: " + text);
    }
    if (used != t.size()) throw DomainError("not a number: " + text);
    return sign * v;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(parse_real(part));
    return out;
}

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

SearchOptions search_options(const RunOptions& o) {
    SearchOptions s;
    s.budget = o.budget;
    s.seed = o.seed;
    s.horizon = o.horizon;
    s.period.tol_period = o.tol_period;
    s.threads = o.threads;
    return s;
}

OrbitReport orbit_report(const CriticalOrbit& o) {
    return {o.f_value, to_string(o.classification), o.degenerate, o.period,
            o.geodesic_residual, o.grad_norm, to_std(o.representative)};
}

AnalysisReport base_report(const GalleryEntry& e, const RunOptions& o) {
    AnalysisReport r;
    r.entry_name = e.name;
    r.signature = e.metric.signature();
    r.killing_residual_max = e.killing.max_residual;
    r.killing_certified = e.killing.certified;
    r.seed = o.seed;
    r.budget = o.budget;
    r.tolerances = o;
    return r;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

void to_json(json& j, const Fraction& f) { j = json{{"p", f.p}, {"q", f.q}}; }

void from_json(const json& j, Fraction& f) {
    f.p = j.at("p").get<std::int64_t>();
    f.q = j.at("q").get<std::int64_t>();
}

void to_json(json& j, const ApproximationCertificate& c) {
    j = json{{"alpha", c.alpha},
             {"convergents", c.convergents},
             {"gaps", c.gaps},
             {"sup_field_gaps", c.sup_field_gaps},
             {"field_gap_bounds", c.field_gap_bounds},
             {"min_f_signs", c.min_f_signs},
             {"min_f_values", c.min_f_values}};
}

void from_json(const json& j, ApproximationCertificate& c) {
    j.at("alpha").get_to(c.alpha);
    j.at("convergents").get_to(c.convergents);
    j.at("gaps").get_to(c.gaps);
    j.at("sup_field_gaps").get_to(c.sup_field_gaps);
    j.at("field_gap_bounds").get_to(c.field_gap_bounds);
    j.at("min_f_signs").get_to(c.min_f_signs);
    j.at("min_f_values").get_to(c.min_f_values);
}

void to_json(json& j, const AnalysisReport& r) {
    json orbits = json::array();
    for (const auto& o : r.critical_orbits)
        orbits.push_back({{"f_value", o.f_value},
                          {"classification", o.classification},
                          {"degenerate", o.degenerate},
                          {"period", optional_json(o.period)},
                          {"geodesic_residual", o.geodesic_residual},
                          {"grad_norm", o.grad_norm},
                          {"representative", o.representative}});
    json scan = json::array();
    for (const auto& s : r.fiber_scan)
        scan.push_back({{"start", s.start},
                        {"period", optional_json(s.period)},
                        {"deck_word", s.deck_word},
                        {"orbit_coordinate", optional_json(s.orbit_coordinate)}});
    json approx = nullptr;
    if (r.approximation) {
        json items = json::array();
        for (const auto& a : r.approximation->approximants) {
            json closures = json::array();
            for (const auto& c : a.closure_periods) closures.push_back(optional_json(c));
            items.push_back({{"slope", a.slope},
                             {"killing_residual", a.killing_residual},
                             {"orbit_count", a.orbit_count},
                             {"certified_orbits", a.certified_orbits},
                             {"orbit_periods", a.orbit_periods},
                             {"closure_periods", closures}});
        }
        approx = {{"already_closed", r.approximation->already_closed},
                  {"certificate", r.approximation->certificate},
                  {"approximants", items}};
    }
    j = json{{"entry_name", r.entry_name},
             {"signature", {{"n_plus", r.signature.n_plus}, {"n_minus", r.signature.n_minus}}},
             {"killing_residual_max", r.killing_residual_max},
             {"killing_certified", r.killing_certified},
             {"degenerate_constant", r.degenerate_constant},
             {"critical_orbits", orbits},
             {"fiber_scan", scan},
             {"approximation", approx},
             {"runtime_ms", r.runtime_ms},
             {"seed", r.seed},
             {"tolerances",
              {{"budget", r.budget},
               {"horizon", r.tolerances.horizon},
               {"tol_geo", r.tolerances.tol_geo},
               {"tol_period", r.tolerances.tol_period}}}};
}

void from_json(const json& j, AnalysisReport& r) {
    j.at("entry_name").get_to(r.entry_name);
    r.signature.n_plus = j.at("signature").at("n_plus").get<int>();
    r.signature.n_minus = j.at("signature").at("n_minus").get<int>();
    j.at("killing_residual_max").get_to(r.killing_residual_max);
    j.at("killing_certified").get_to(r.killing_certified);
    j.at("degenerate_constant").get_to(r.degenerate_constant);
    r.critical_orbits.clear();
    for (const auto& o : j.at("critical_orbits"))
        r.critical_orbits.push_back({o.at("f_value").get<double>(),
                                     o.at("classification").get<std::string>(),
                                     o.at("degenerate").get<bool>(),
                                     optional_from<double>(o.at("period")),
                                     o.at("geodesic_residual").get<double>(),
                                     o.at("grad_norm").get<double>(),
                                     o.at("representative").get<std::vector<double>>()});
    r.fiber_scan.clear();
    for (const auto& s : j.at("fiber_scan"))
        r.fiber_scan.push_back({s.at("start").get<std::vector<double>>(),
                                optional_from<double>(s.at("period")),
                                s.at("deck_word").get<std::string>(),
                                optional_from<double>(s.at("orbit_coordinate"))});
    r.approximation.reset();
    if (const auto& a = j.at("approximation"); !a.is_null()) {
        ApproximationReport ar;
        a.at("already_closed").get_to(ar.already_closed);
        a.at("certificate").get_to(ar.certificate);
        for (const auto& item : a.at("approximants")) {
            ApproximantReport x;
            item.at("slope").get_to(x.slope);
            item.at("killing_residual").get_to(x.killing_residual);
            item.at("orbit_count").get_to(x.orbit_count);
            item.at("certified_orbits").get_to(x.certified_orbits);
            item.at("orbit_periods").get_to(x.orbit_periods);
            for (const auto& c : item.at("closure_periods"))
                x.closure_periods.push_back(optional_from<double>(c));
            ar.approximants.push_back(std::move(x));
        }
        r.approximation = std::move(ar);
    }
    j.at("runtime_ms").get_to(r.runtime_ms);
    j.at("seed").get_to(r.seed);
    const auto& t = j.at("tolerances");
    t.at("budget").get_to(r.budget);
    r.tolerances.seed = r.seed;
    r.tolerances.budget = r.budget;
    t.at("horizon").get_to(r.tolerances.horizon);
    t.at("tol_geo").get_to(r.tolerances.tol_geo);
    t.at("tol_period").get_to(r.tolerances.tol_period);
}

AnalysisReport cmd_analyze(const std::string& name, const EntryParams& params,
                           const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const GalleryEntry e = make_entry(name, params);
    AnalysisReport r = base_report(e, options);

    for (const auto& o : find_critical_orbits(e.metric, e.manifold, e.killing, search_options(options)))
        r.critical_orbits.push_back(orbit_report(o));
    r.degenerate_constant =
        r.critical_orbits.size() == 1 && r.critical_orbits.front().classification == "DegenerateConstant";

    if (r.degenerate_constant) {
        PeriodOptions po;
        po.tol_period = options.tol_period;
        for (const Vec& s : e.scan_starts) {
            FiberScanEntry f;
            f.start = to_std(s);
            if (auto cert = detect_period(e.manifold, e.killing.field, s, options.horizon, po)) {
                f.period = cert->period;
                f.deck_word = word_to_string(e.manifold, cert->deck.word);
            }
            if (e.name == "klein-bottle") f.orbit_coordinate = klein_orbit_coordinate(s(0));
            r.fiber_scan.push_back(std::move(f));
        }
    }
    r.runtime_ms = elapsed_ms(start);
    return r;
}

AnalysisReport cmd_approximate(const std::string& name, const EntryParams& params, int n,
                               const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const GalleryEntry e = make_entry(name, params);
    AnalysisReport r = base_report(e, options);
    ApproximationReport ar;
    if (n <= 0) {
        r.approximation = std::move(ar);
        r.runtime_ms = elapsed_ms(start);
        return r;
    }

    const ApproximationSequence seq = approximate_closed(e.killing, n);
    ar.already_closed = seq.already_closed;
    ar.certificate = certify_uniform_convergence(e.metric, e.manifold, e.killing, seq, 500);

    const double torus_period = e.family && e.family->period > 0 ? e.family->period : 1.0;
    PeriodOptions po;
    po.tol_period = options.tol_period;
    std::mt19937_64 rng(options.seed);
    std::vector<Vec> line_starts;
    for (int i = 0; i < 3; ++i) line_starts.push_back(e.manifold.sample(rng));

    for (const Approximant& a : seq.approximants) {
        ApproximantReport x;
        x.slope = a.slope;
        const KillingField kn = certify_killing(e.metric, e.manifold, a.field, 50);
        x.killing_residual = kn.max_residual;

        SearchOptions so = search_options(options);
        so.horizon = std::max(options.horizon, torus_period * static_cast<double>(a.slope.q + 1));
        const auto orbits = find_critical_orbits(e.metric, e.manifold, kn, so);
        x.orbit_count = static_cast<int>(orbits.size());
        for (const auto& o : orbits) {
            if (o.period) x.orbit_periods.push_back(*o.period);
            if (o.period && o.geodesic_residual <= options.tol_geo) ++x.certified_orbits;
        }
        const double closure_horizon = torus_period * static_cast<double>(std::abs(a.slope.q) + 1);
        for (const Vec& s : line_starts) {
            const auto cert = detect_period(e.manifold, kn.field, s, closure_horizon, po);
            x.closure_periods.push_back(cert ? std::optional<double>(cert->period) : std::nullopt);
        }
        ar.approximants.push_back(std::move(x));
    }
    r.approximation = std::move(ar);
    r.runtime_ms = elapsed_ms(start);
    return r;
}

CurveSample cmd_trace(const std::string& name, const EntryParams& params, const Vec& start,
                      double T, bool geodesic, double tol) {
    const GalleryEntry e = make_entry(name, params);
    if (start.size() != e.manifold.ambient_dim())
        throw DomainError("start point needs " + std::to_string(e.manifold.ambient_dim()) +
                          " coordinates");
    const Vec p0 = e.manifold.project_point(start);
    if ((p0 - start).norm() > 1e-6) throw DomainError("start point off manifold");
    FlowOptions fo;
    fo.tol = tol;
    fo.manifold = &e.manifold;
    fo.metric = &e.metric;
    if (geodesic) return shoot_geodesic(e.metric, e.manifold, p0, e.killing(p0), T, fo);
    return flow(e.killing.field, p0, T, fo);
}

std::string canonical_report_text(const AnalysisReport& r) {
    json j = r;
    j.erase("runtime_ms");
    return j.dump(2);
}

}  // namespace kg
