#pragma once

#include "kg/metric.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace kg {

struct KillingFamily;

/// Vector field tagged with optional torus generator coordinates. When
/// `torus` is set, the field equals sum_i generator(i) * torus->members[i].
struct KillingField {
    VectorField field;
    std::optional<Vec> generator;
    std::shared_ptr<const KillingFamily> torus;
    std::string label;
    /// Set by certify_killing; false until certified.
    bool certified = false;
    double max_residual = std::numeric_limits<double>::quiet_NaN();

    Vec operator()(const Vec& p) const { return field(p); }
};

/// Commuting family of Killing fields. `period` is the flow time after which
/// each member returns to the identity (2π for rotation actions, 1 for unit
/// translations on a unit lattice); 0 if unknown.
struct KillingFamily {
    std::vector<KillingField> members;
    bool commuting = false;
    double period = 0.0;
    double max_bracket = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kKillingTol = 1e-8;
inline constexpr double kBracketTol = 1e-7;

/// Maximal symmetric part of ∇K over a Euclidean-orthonormal tangent probe
/// basis: max_ij |g(∇_{v_i}K, v_j) + g(∇_{v_j}K, v_i)|.
double killing_residual(const MetricField& g, const ManifoldModel& m, const VectorField& k,
                        const Vec& p);

/// Samples the residual at `samples` points and records the certification
/// flag on the field. Never throws on a residual violation.
KillingField certify_killing(const MetricField& g, const ManifoldModel& m, KillingField k,
                             int samples = 200, std::uint64_t seed = 7);

/// g_R(v,w) = g(v,w) - 2 g(v,K) g(w,K) / g(K,K). Lazily composed; each
/// evaluation throws DomainError if g(K,K) >= -1e-10 there.
MetricField lorentz_to_riemann(const MetricField& g, const VectorField& k);

/// g(v,w) = g_R(v,w) - 2 g_R(v,K) g_R(w,K) / g_R(K,K). Lazily composed; each
/// evaluation throws SingularityError if |K| < 1e-12 there.
MetricField riemann_to_lorentz(const MetricField& g_r, const VectorField& k);

/// Finite-difference [X, Y](p) = DY(p) X(p) - DX(p) Y(p).
Vec lie_bracket(const VectorField& x, const VectorField& y, const Vec& p);

/// Builds a family and verifies pairwise brackets on samples.
KillingFamily make_family(const ManifoldModel& m, std::vector<KillingField> members,
                          double period, int samples = 50, std::uint64_t seed = 11);

/// A(q)_ij = g(K^i_q, K^j_q).
Mat gram_matrix(const MetricField& g, const ManifoldModel& m, const KillingFamily& family,
                const Vec& q);

/// K^x = sum_i x_i K^i with generator coordinates x. Throws DomainError for
/// x = 0 or a non-commuting family.
KillingField combine_family(std::shared_ptr<const KillingFamily> family, const Vec& x,
                            std::string label = "combined");

}  // namespace kg
