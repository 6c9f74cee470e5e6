// kgeo: command line front end for the gallery analyses.
#include "kg/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSearch = 3;
constexpr int kExitUnsupported = 4;

struct Flags {
    std::string entry;
    std::string alpha = "sqrt2";
    std::string slope = "0,1";
    std::string theta = "1";
    std::string start;
    int n = 4;
    int family = 2;
    int budget = 64;
    std::uint64_t seed = 42;
    double horizon = 50.0;
    double tol_geo = kg::kGeodesicTol;
    double tol_period = 1e-6;
    double T = 1.0;
    bool geodesic = false;
    std::string out;
};

kg::EntryParams entry_params(const Flags& f) {
    kg::EntryParams p;
    p.alpha = kg::parse_real(f.alpha);
    const auto slope = kg::parse_real_list(f.slope);
    if (slope.size() != 2) throw kg::DomainError("--slope takes two values a,b");
    p.slope_a = slope[0];
    p.slope_b = slope[1];
    p.theta = kg::parse_real(f.theta);
    p.family_size = f.family;
    return p;
}

kg::RunOptions run_options(const Flags& f) {
    if (f.budget < 1) throw kg::DomainError("--budget must be positive");
    if (!(f.horizon > 0.0)) throw kg::DomainError("--horizon must be positive");
    kg::RunOptions o;
    o.seed = f.seed;
    o.budget = f.budget;
    o.horizon = f.horizon;
    o.tol_geo = f.tol_geo;
    o.tol_period = f.tol_period;
    return o;
}

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw kg::DomainError("cannot open " + path);
    write(os);
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("entry", f.entry, "gallery entry")->required();
    cmd->add_option("--alpha", f.alpha, "stationary-s3 rotation ratio");
    cmd->add_option("--slope", f.slope, "flat-torus field a,b");
    cmd->add_option("--theta", f.theta, "mapping-torus angle");
    cmd->add_option("--family", f.family, "commuting-t4 family size (1 or 2)");
    cmd->add_option("--budget", f.budget, "search starts");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--horizon", f.horizon, "period search horizon");
    cmd->add_option("--tol-geo", f.tol_geo, "geodesic residual tolerance");
    cmd->add_option("--tol-period", f.tol_period, "period tolerance");
    cmd->add_option("--out", f.out, "output path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Killing field and periodic geodesic analysis"};
    app.require_subcommand(1);
    Flags f;

    auto* list = app.add_subcommand("list", "print gallery entries");
    auto* analyze = app.add_subcommand("analyze", "critical orbits and periods");
    add_common(analyze, f);
    auto* approximate = app.add_subcommand("approximate", "closed Killing approximants");
    add_common(approximate, f);
    approximate->add_option("--n", f.n, "number of convergents")->check(CLI::NonNegativeNumber);
    auto* trace = app.add_subcommand("trace", "integral curve or geodesic as CSV");
    add_common(trace, f);
    trace->add_option("--start", f.start, "start point, comma separated")->required();
    trace->add_option("--T", f.T, "duration");
    trace->add_flag("--geodesic", f.geodesic, "geodesic with initial velocity K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : kg::gallery_names()) std::cout << name << '\n';
        } else if (analyze->parsed()) {
            const auto r = kg::cmd_analyze(f.entry, entry_params(f), run_options(f));
            emit(f.out, [&](std::ostream& os) { os << nlohmann::json(r).dump(2) << '\n'; });
        } else if (approximate->parsed()) {
            const auto r = kg::cmd_approximate(f.entry, entry_params(f), f.n, run_options(f));
            emit(f.out, [&](std::ostream& os) { os << nlohmann::json(r).dump(2) << '\n'; });
        } else if (trace->parsed()) {
            const auto coords = kg::parse_real_list(f.start);
            const kg::Vec p = Eigen::Map<const kg::Vec>(coords.data(), static_cast<Eigen::Index>(coords.size()));
            if (f.T < 0.0) throw kg::DomainError("--T must be non-negative");
            const auto curve = kg::cmd_trace(f.entry, entry_params(f), p, f.T, f.geodesic);
            emit(f.out, [&](std::ostream& os) { kg::write_curve_csv(os, curve); });
        }
    } catch (const kg::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kg::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const kg::SearchFailure& e) {
        std::cerr << "search failed: " << e.what() << '\n';
        return kExitSearch;
    } catch (const std::exception& e) {
        // Singular metrics and stalled integrations end the search too.
        std::cerr << "search failed: " << e.what() << '\n';
        return kExitSearch;
    }
    return kExitOk;
}
