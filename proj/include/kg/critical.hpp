#pragma once

#include "kg/geodesic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kg {

enum class CriticalKind { Min, Max, Saddle, DegenerateConstant };

std::string to_string(CriticalKind kind);

struct CriticalOrbit {
    Vec representative;
    double f_value = 0.0;
    double grad_norm = 0.0;
    CriticalKind classification = CriticalKind::Saddle;
    /// A transverse Hessian eigenvalue within 1e-6 of zero.
    bool degenerate = false;
    double geodesic_residual = 0.0;
    std::optional<double> period;
};

/// f(p) = g(K_p, K_p).
double f_eval(const MetricField& g, const ManifoldModel& m, const VectorField& k, const Vec& p);

/// g-gradient of f from df(v) = 2 g(∇_v K, K) on a tangent basis (metric
/// compatibility only; no Killing property used).
Vec grad_f(const MetricField& g, const ManifoldModel& m, const VectorField& k, const Vec& p);

/// -2 ∇_K K, equal to grad f when K is Killing.
Vec killing_acceleration_gradient(const MetricField& g, const ManifoldModel& m,
                                  const VectorField& k, const Vec& p);

struct Classification {
    CriticalKind kind = CriticalKind::Saddle;
    bool degenerate = false;
    Vec transverse_eigenvalues;
};

/// Second-order classification on the complement of the flow direction.
/// Throws DomainError if f is constant near p (nothing to classify).
Classification classify_critical(const MetricField& g, const ManifoldModel& m,
                                 const VectorField& k, const Vec& p);

struct SearchOptions {
    int budget = 64;
    std::uint64_t seed = 42;
    int variance_samples = 256;
    double variance_threshold = 1e-12;
    double grad_tol = 1e-7;
    double dedup_tol = 1e-4;
    /// Horizon for period detection and duplicate-orbit tests.
    double horizon = 50.0;
    PeriodOptions period;
    /// Worker cap; 0 = hardware concurrency (or KG_THREADS).
    int threads = 0;
};

/// Multi-start search for critical orbits of f, sorted by f ascending.
/// Returns a single DegenerateConstant marker when f is constant on samples.
/// Throws SearchFailure if no start converges.
std::vector<CriticalOrbit> find_critical_orbits(const MetricField& g, const ManifoldModel& m,
                                                const KillingField& k,
                                                const SearchOptions& options = {});

/// Worker count from KG_THREADS, capped by hardware concurrency.
int worker_count(int requested = 0);

}  // namespace kg
