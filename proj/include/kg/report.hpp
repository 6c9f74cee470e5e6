#pragma once

#include "kg/closed_approx.hpp"
#include "kg/critical.hpp"
#include "kg/gallery.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kg {

/// Constructor parameters for gallery entries; unused fields are ignored.
struct EntryParams {
    double alpha = 1.4142135623730951;
    double slope_a = 0.0;
    double slope_b = 1.0;
    double theta = 1.0;
    int family_size = 2;
};

/// Throws DomainError for unknown names or invalid parameters.
GalleryEntry make_entry(const std::string& name, const EntryParams& params);

/// Parses a real, accepting the constants sqrt2, golden and pi (optionally
/// negated). Throws DomainError.
double parse_real(const std::string& text);
/// "a,b" with each part accepted by parse_real.
std::vector<double> parse_real_list(const std::string& text);

struct RunOptions {
    std::uint64_t seed = 42;
    int budget = 64;
    double horizon = 50.0;
    double tol_geo = kGeodesicTol;
    double tol_period = 1e-6;
    int threads = 0;
};

struct OrbitReport {
    double f_value = 0.0;
    std::string classification;
    bool degenerate = false;
    std::optional<double> period;
    double geodesic_residual = 0.0;
    double grad_norm = 0.0;
    std::vector<double> representative;
};

struct FiberScanEntry {
    std::vector<double> start;
    std::optional<double> period;
    std::string deck_word;
    std::optional<double> orbit_coordinate;
};

struct ApproximantReport {
    Fraction slope;
    double killing_residual = 0.0;
    int orbit_count = 0;
    int certified_orbits = 0;
    std::vector<double> orbit_periods;
    /// Closing times of sampled integral lines (none if one did not close).
    std::vector<std::optional<double>> closure_periods;
};

struct ApproximationReport {
    bool already_closed = false;
    ApproximationCertificate certificate;
    std::vector<ApproximantReport> approximants;
};

struct AnalysisReport {
    std::string entry_name;
    Signature signature;
    double killing_residual_max = 0.0;
    bool killing_certified = false;
    bool degenerate_constant = false;
    std::vector<OrbitReport> critical_orbits;
    std::vector<FiberScanEntry> fiber_scan;
    std::optional<ApproximationReport> approximation;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;
    int budget = 0;
    RunOptions tolerances;
};

void to_json(nlohmann::json& j, const Fraction& f);
void from_json(const nlohmann::json& j, Fraction& f);
void to_json(nlohmann::json& j, const ApproximationCertificate& c);
void from_json(const nlohmann::json& j, ApproximationCertificate& c);
void to_json(nlohmann::json& j, const AnalysisReport& r);
void from_json(const nlohmann::json& j, AnalysisReport& r);

/// Critical search, period detection and (for constant f) a fiber scan.
/// Throws SearchFailure.
AnalysisReport cmd_analyze(const std::string& entry, const EntryParams& params,
                           const RunOptions& options);

/// Closed approximation with certificate. n = 0 yields an empty
/// certificate. Throws UnsupportedError for evaluator-only fields.
AnalysisReport cmd_approximate(const std::string& entry, const EntryParams& params, int n,
                               const RunOptions& options);

/// Integral curve (or geodesic with initial velocity K) from start for time
/// T. Starts within 1e-6 of the manifold are projected; farther ones throw
/// DomainError.
CurveSample cmd_trace(const std::string& entry, const EntryParams& params, const Vec& start,
                      double T, bool geodesic, double tol = 1e-10);

/// Report JSON with runtime_ms removed, for reproducibility checks.
std::string canonical_report_text(const AnalysisReport& r);

}  // namespace kg
