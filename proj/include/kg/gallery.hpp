#pragma once

#include "kg/killing.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kg {

/// Ground truth attached to a gallery entry.
struct ExpectedRecord {
    bool degenerate_constant = false;
    std::vector<double> critical_f_values;  // ascending
    std::optional<int> orbit_count;
    std::vector<double> periods;            // matching critical_f_values where known
    std::string notes;
};

struct GalleryEntry {
    std::string name;
    ManifoldModel manifold;
    MetricField metric;
    KillingField killing;
    /// Commuting family the field is drawn from (torus action).
    std::shared_ptr<const KillingFamily> family;
    ExpectedRecord expected;
    /// Starts for a fiber scan of periods (degenerate-constant entries).
    std::vector<Vec> scan_starts;
};

/// T^2 = R^2/Z^2 with dx^2 - dt^2 and K = a ∂_x + b ∂_t. Coordinates (x, t).
GalleryEntry make_flat_lorentzian_torus(double a, double b);

/// R^2 with dx^2 - dt^2 modulo a:(x,t)->(x+1,t), b:(x,t)->(1-x,t+1); K = ∂_t.
GalleryEntry make_klein_bottle();

/// Orbit-space coordinate of the Klein bottle fibration: x0 -> [0, 1/2].
double klein_orbit_coordinate(double x0);

/// S^3 in C^2 = R^4 (z = x1 + i x2, w = x3 + i x4), K = (iz, i alpha w),
/// g from the round metric and K.
GalleryEntry make_stationary_sphere(double alpha);

/// (S^2 x R) modulo sigma(p,t) = (-p,t) and tau(p,t) = (R_theta p, t+1);
/// metric round ⊕ (-dt^2), K = ∂_t. Ambient coordinates (p1, p2, p3, t).
/// Throws DomainError when theta/pi is rational with denominator <= 1e6.
GalleryEntry make_mapping_torus(double theta);

/// Flat T^4 = R^4/Z^4 with dx^2 + dy^2 - dt1^2 - dt2^2 and the family
/// {∂_t1, ∂_t2} (m = 2) or {∂_t1} (m = 1). Coordinates (x, y, t1, t2).
GalleryEntry make_commuting_family_example(int m);

/// Names addressable from the CLI.
std::vector<std::string> gallery_names();

}  // namespace kg
