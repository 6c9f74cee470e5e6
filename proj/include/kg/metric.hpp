#pragma once

#include "kg/manifold.hpp"

#include <vector>

namespace kg {

enum class MetricRole { Riemannian, Lorentzian, SemiRiemannian };

struct Signature {
    int n_plus = 0;
    int n_minus = 0;
    bool operator==(const Signature&) const = default;
};

/// Point -> symmetric ambient bilinear form whose restriction to T_p M is
/// the metric. The ambient form must be nondegenerate near M and its
/// restriction to T_p M must have the declared signature.
class MetricField {
public:
    using Evaluator = std::function<Mat(const Vec&)>;

    MetricField(Evaluator evaluator, Signature signature, MetricRole role);

    /// Constant ambient form.
    static MetricField constant(const Mat& form, Signature signature, MetricRole role);

    Mat operator()(const Vec& p) const;
    const Evaluator& evaluator() const { return evaluator_; }
    Signature signature() const { return signature_; }
    MetricRole role() const { return role_; }
    /// Index m of a semi-Riemannian metric (number of negative directions).
    int index() const { return signature_.n_minus; }

private:
    Evaluator evaluator_;
    Signature signature_;
    MetricRole role_;
};

std::string to_string(MetricRole role);

/// g_p(v, w). Throws DomainError if p is off the manifold.
double metric_eval(const MetricField& g, const ManifoldModel& m, const Vec& p, const Vec& v,
                   const Vec& w);

/// Eigen-signs of g restricted to T_p M (tolerance 1e-12 on eigenvalue size).
Signature tangent_signature(const MetricField& g, const ManifoldModel& m, const Vec& p);

/// Ambient Christoffel symbols: gamma[k](i, j) = Γ^k_ij of the ambient form.
/// The intrinsic connection is the g-orthogonal tangential projection of the
/// ambient one.
struct Christoffel {
    std::vector<Mat> gamma;

    /// Γ(v, w)^k = Γ^k_ij v^i w^j.
    Vec contract(const Vec& v, const Vec& w) const;
};

/// Finite-difference Christoffel symbols (central differences, step 1e-5).
/// Throws SingularityError if |det g| < 1e-12 at p.
Christoffel christoffel(const MetricField& g, const Vec& p);

/// g-orthogonal projection of an ambient vector onto T_p M.
Vec metric_tangent_projection(const MetricField& g, const ManifoldModel& m, const Vec& p,
                              const Vec& u);

/// ∇_v X at p for the Levi-Civita connection of g restricted to M.
Vec covariant_derivative(const MetricField& g, const ManifoldModel& m, const VectorField& x,
                         const Vec& v, const Vec& p);

/// Raises a covector given by its values on the tangent basis B to the
/// g-dual tangent vector.
Vec raise_index(const MetricField& g, const Mat& basis, const Vec& p, const Vec& covector);

/// |g(γ p)(dγ v, dγ w) - g(p)(v, w)| maximised over a tangent basis.
double isometry_defect(const MetricField& g, const ManifoldModel& m, const AffineMap& deck,
                       const Vec& p);

}  // namespace kg
