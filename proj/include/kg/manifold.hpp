#pragma once

#include "kg/core.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace kg {

/// Level-set constraint c(x) = 0 with analytic first and second derivatives.
struct Constraint {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
};

/// Unit sphere |x_{first..first+dim-1}|^2 - 1 = 0 inside an ambient space of
/// size ambient_dim.
Constraint sphere_constraint(int ambient_dim, int first, int dim);

/// x -> A x + b.
struct AffineMap {
    Mat linear;
    Vec offset;

    static AffineMap identity(int dim);
    Vec apply(const Vec& x) const { return linear * x + offset; }
    Vec push(const Vec& v) const { return linear * v; }
    AffineMap compose(const AffineMap& inner) const;  // this ∘ inner
    AffineMap inverse() const;
    AffineMap power(int k) const;
};

/// One syllable g^power of a deck word.
struct Syllable {
    int generator = 0;
    int power = 0;
    bool operator==(const Syllable&) const = default;
};

/// Deck group element. The word reads as a composition, rightmost syllable
/// applied first.
struct DeckElement {
    std::vector<Syllable> word;
    AffineMap map;

    int length() const { return static_cast<int>(word.size()); }
};

struct DeckGenerator {
    std::string name;
    AffineMap map;
};

enum class ManifoldKind { FlatQuotient, Embedded, ProductQuotient };

std::string to_string(ManifoldKind kind);

inline constexpr double kOnManifoldTol = 1e-8;
inline constexpr double kIdentityTol = 1e-6;
inline constexpr int kDefaultMaxWordLen = 6;

class ManifoldModel {
public:
    using Canonicalizer = std::function<DeckElement(const Vec&)>;
    using Sampler = std::function<Vec(std::mt19937_64&)>;

    ManifoldModel(ManifoldKind kind, int ambient_dim, int intrinsic_dim);

    ManifoldKind kind() const { return kind_; }
    int ambient_dim() const { return ambient_dim_; }
    int intrinsic_dim() const { return intrinsic_dim_; }
    const std::optional<Constraint>& constraint() const { return constraint_; }
    const std::vector<DeckGenerator>& deck_generators() const { return generators_; }
    const std::optional<std::pair<Vec, Vec>>& fundamental_box() const { return box_; }

    ManifoldModel& with_constraint(Constraint c);
    ManifoldModel& with_generator(std::string name, AffineMap map);
    ManifoldModel& with_box(Vec lo, Vec hi);
    /// Deck element taking a point into the fundamental box.
    ManifoldModel& with_canonicalizer(Canonicalizer c);
    ManifoldModel& with_sampler(Sampler s);

    double constraint_residual(const Vec& p) const;
    bool on_manifold(const Vec& p, double tol = kOnManifoldTol) const;
    /// Throws DomainError when p is off the manifold.
    void require_on_manifold(const Vec& p, double tol = kOnManifoldTol) const;

    /// Newton projection onto the constraint set; identity without one.
    Vec project_point(const Vec& p) const;
    /// Euclidean orthogonal projection onto T_p M.
    Vec project_tangent(const Vec& p, const Vec& v) const;
    /// Ambient unit normal of the constraint (empty vector if unconstrained).
    Vec normal(const Vec& p) const;
    /// Euclidean-orthonormal basis of T_p M (ambient_dim x intrinsic_dim),
    /// Gram-Schmidt on projected coordinate directions.
    Mat tangent_basis(const Vec& p) const;

    Vec sample(std::mt19937_64& rng) const;

    DeckElement canonicalize(const Vec& p) const;
    /// Deck elements reachable by words of at most max_word_len letters
    /// that move the fundamental box onto a copy meeting it.
    const std::vector<DeckElement>& neighbourhood() const;
    int max_word_len() const { return max_word_len_; }
    void set_max_word_len(int n);

    /// Distance between the deck orbits of p and q, with the element
    /// realising it (element maps p close to q).
    std::pair<double, DeckElement> quotient_distance(const Vec& p, const Vec& q) const;

private:
    ManifoldKind kind_;
    int ambient_dim_;
    int intrinsic_dim_;
    std::optional<Constraint> constraint_;
    std::vector<DeckGenerator> generators_;
    std::optional<std::pair<Vec, Vec>> box_;
    Canonicalizer canonicalizer_;
    Sampler sampler_;
    int max_word_len_ = kDefaultMaxWordLen;
    mutable std::shared_ptr<const std::vector<DeckElement>> neighbourhood_;
    mutable std::shared_ptr<std::mutex> neighbourhood_mutex_ = std::make_shared<std::mutex>();
};

/// Identity element for an ambient space of the given size.
DeckElement identity_element(int dim);

/// Concatenate words, composing the maps (outer ∘ inner); adjacent
/// syllables of the same generator merge.
DeckElement compose(const DeckElement& outer, const DeckElement& inner);
DeckElement inverse(const DeckElement& e);
DeckElement generator_power(const ManifoldModel& m, int generator, int power);

/// Deck element gamma (at most max_word_len syllables) with |gamma p - q| <= 1e-6.
std::optional<DeckElement> reduce_point(const ManifoldModel& m, const Vec& p, const Vec& q,
                                        int max_word_len = kDefaultMaxWordLen);

/// Word as text, e.g. "a^-1 b".
std::string word_to_string(const ManifoldModel& m, const std::vector<Syllable>& word);

}  // namespace kg
