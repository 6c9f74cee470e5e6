#pragma once

#include "kg/killing.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace kg {

struct Fraction {
    std::int64_t p = 0;
    std::int64_t q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool operator==(const Fraction&) const = default;
};

/// Convergent denominators stop growing here; beyond it a double cannot
/// distinguish the next convergent from the input.
inline constexpr std::int64_t kMaxDenominator = 10'000'000;

/// First n continued-fraction convergents of alpha, computed exactly on the
/// binary value of the double. Terminates early for rationals and once the
/// next denominator would exceed max_denominator.
std::vector<Fraction> continued_fraction_convergents(double alpha, int n,
                                                     std::int64_t max_denominator = kMaxDenominator);

/// Exact p/q with q <= max_denominator that the double equals up to a few
/// ulps, if any.
std::optional<Fraction> detect_rational(double x, std::int64_t max_denominator = 1'000'000);

/// Lie-algebra element in torus coordinates, e.g. (1, alpha).
struct TorusDirection {
    Vec coords;
    /// Exact coordinate ratios coords(i)/coords(0) when all are rational.
    std::optional<std::vector<Fraction>> ratios;

    bool rational() const { return ratios.has_value(); }
};

TorusDirection make_torus_direction(const Vec& coords, std::int64_t max_denominator = 1'000'000);

struct Approximant {
    KillingField field;
    Fraction slope;
};

struct ApproximationSequence {
    std::vector<Approximant> approximants;
    /// Input already closed; `approximants` holds the field itself.
    bool already_closed = false;
};

/// Closed fields K^n with generators (x1, x1 p_n/q_n) built from the
/// convergents of alpha = x2/x1. Throws UnsupportedError for fields without
/// torus generator coordinates.
ApproximationSequence approximate_closed(const KillingField& k, int n);

struct ApproximationCertificate {
    double alpha = 0.0;
    std::vector<Fraction> convergents;
    std::vector<double> gaps;
    std::vector<double> sup_field_gaps;
    /// |alpha - p/q| * sup|K^2| from the linear dependence on the generator.
    std::vector<double> field_gap_bounds;
    std::vector<bool> min_f_signs;
    std::vector<double> min_f_values;

    /// gaps strictly decreasing and each below 1/q^2.
    bool gaps_valid() const;
};

/// Samples the approximants against K on the manifold.
ApproximationCertificate certify_uniform_convergence(const MetricField& g, const ManifoldModel& m,
                                                     const KillingField& k,
                                                     const ApproximationSequence& seq, int samples,
                                                     std::uint64_t seed = 5);

}  // namespace kg
