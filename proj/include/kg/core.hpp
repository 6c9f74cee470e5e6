#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace kg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Points and tangent vectors are stored in ambient coordinates.
using Point = Vec;

/// Ambient vector field evaluator. Fields are defined on an open
/// neighbourhood of the manifold, so finite differences may step off it.
using VectorField = std::function<Vec(const Vec&)>;

/// Point outside the domain of an operation (off the manifold, bad argument).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Metric degenerate where a nondegenerate one is needed, or a field
/// vanishes where it must not.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive integrator could not make progress.
class StiffnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Multi-start critical search found nothing.
class SearchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation needs a capability the input does not carry (e.g. torus
/// generator coordinates on an evaluator-only field).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite-difference steps for metric and field derivatives.
inline constexpr double kFirstDiffStep = 1e-5;
inline constexpr double kSecondDiffStep = 1e-4;

/// Central-difference Jacobian of an ambient map.
Mat numerical_jacobian(const VectorField& f, const Vec& x, double h = kFirstDiffStep);

/// Central-difference directional derivative D f(x)[v].
Vec directional_derivative(const VectorField& f, const Vec& x, const Vec& v,
                           double h = kFirstDiffStep);

}  // namespace kg
