#pragma once

#include "kg/integrator.hpp"
#include "kg/killing.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace kg {

/// Time-stamped integration output. `energies` holds g(c', c') when a metric
/// was supplied (NaN otherwise); for a Killing flow this is f = g(K, K).
struct CurveSample {
    std::vector<double> times;
    std::vector<Vec> points;
    std::vector<Vec> velocities;
    std::vector<Vec> accelerations;
    std::vector<double> energies;
    double energy_drift = 0.0;
    double constraint_drift = 0.0;

    std::size_t size() const { return times.size(); }
};

/// Optional context for integrations. The manifold enables constraint
/// stabilisation after each accepted step; the metric enables energy
/// diagnostics.
struct FlowOptions {
    double tol = 1e-10;
    double max_step = 0.05;
    const ManifoldModel* manifold = nullptr;
    const MetricField* metric = nullptr;
};

/// Integral curve c' = K(c), c(0) = p0 on [0, T] (T may be negative).
CurveSample flow(const VectorField& k, const Vec& p0, double T, const FlowOptions& options = {});

/// Dense solution of the same flow, for return-map searches.
DenseSolution flow_dense(const VectorField& k, const Vec& p0, double T,
                         const FlowOptions& options = {});

/// Geodesic with c(0) = p0, c'(0) = v0 on [0, T]. For constrained manifolds
/// the normal force keeps c on the level set; positions are re-projected
/// and velocities made tangent after every accepted step.
CurveSample shoot_geodesic(const MetricField& g, const ManifoldModel& m, const Vec& p0,
                           const Vec& v0, double T, const FlowOptions& options = {});

inline constexpr double kGeodesicTol = 1e-5;

/// sup over interior samples of the ambient Euclidean norm of ∇_{c'} c'.
double geodesic_residual(const MetricField& g, const ManifoldModel& m, const CurveSample& c);

struct PeriodCertificate {
    double period = 0.0;
    /// Maps c(0) onto c(period); its differential maps c'(0) onto c'(period).
    DeckElement deck;
    double position_gap = 0.0;
    double velocity_gap = 0.0;
};

struct PeriodOptions {
    double tol_period = 1e-6;     // position and velocity gap bound
    double grid = 1e-3;           // return-distance sampling resolution
    int bisection_steps = 60;
    double integration_tol = 1e-11;
    double max_step = 0.05;
};

/// Smallest s > 1e-6 with a deck element mapping p0 onto c(s) and K(p0)
/// onto c'(s), within the period tolerance. None if the orbit does not close
/// before the horizon or p0 is a zero of K.
std::optional<PeriodCertificate> detect_period(const ManifoldModel& m, const VectorField& k,
                                               const Vec& p0, double horizon,
                                               const PeriodOptions& options = {});

/// Tests a candidate return time directly.
std::optional<PeriodCertificate> check_return(const ManifoldModel& m, const VectorField& k,
                                              const Vec& p0, double s,
                                              const PeriodOptions& options = {});

/// Applies the time-t flow of family member l to every sample of gamma.
/// Velocities and accelerations are pushed forward by central differences
/// of the flow map (all stencil points integrated as one system).
CurveSample translate_geodesic(const KillingFamily& family, std::size_t l,
                               const CurveSample& gamma, double t, const ManifoldModel& m,
                               const MetricField* g = nullptr);

/// Symmetric Hausdorff distance between curve images in the quotient,
/// point-to-polyline in each direction.
double hausdorff_distance(const ManifoldModel& m, const CurveSample& a, const CurveSample& b);

inline constexpr double kDistinctCurveTol = 1e-3;

/// CSV with header s,x1..xn,v1..vn,f.
void write_curve_csv(std::ostream& os, const CurveSample& c);

}  // namespace kg
