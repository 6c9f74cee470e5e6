#include "kg/manifold.hpp"

#include <cmath>
#include <sstream>

namespace kg {

Mat numerical_jacobian(const VectorField& f, const Vec& x, double h) {
    const Vec f0 = f(x);
    Mat jac(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        jac.col(j) = (f(xp) - f(xm)) / (2 * h);
    }
    return jac;
}

Vec directional_derivative(const VectorField& f, const Vec& x, const Vec& v, double h) {
    return (f(x + h * v) - f(x - h * v)) / (2 * h);
}

Constraint sphere_constraint(int ambient_dim, int first, int dim) {
    auto block = [=](const Vec& x) { return x.segment(first, dim); };
    Constraint c;
    c.value = [=](const Vec& x) { return block(x).squaredNorm() - 1.0; };
    c.gradient = [=](const Vec& x) {
        Vec g = Vec::Zero(ambient_dim);
        g.segment(first, dim) = 2.0 * block(x);
        return g;
    };
    c.hessian = [=](const Vec&) {
        Mat h = Mat::Zero(ambient_dim, ambient_dim);
        h.block(first, first, dim, dim) = 2.0 * Mat::Identity(dim, dim);
        return h;
    };
    return c;
}

AffineMap AffineMap::identity(int dim) { return {Mat::Identity(dim, dim), Vec::Zero(dim)}; }

AffineMap AffineMap::compose(const AffineMap& inner) const {
    return {linear * inner.linear, linear * inner.offset + offset};
}

AffineMap AffineMap::inverse() const {
    Mat inv = linear.inverse();
    return {inv, -inv * offset};
}

AffineMap AffineMap::power(int k) const {
    AffineMap base = k < 0 ? inverse() : *this;
    AffineMap out = identity(static_cast<int>(offset.size()));
    for (int i = 0; i < std::abs(k); ++i) out = base.compose(out);
    return out;
}

std::string to_string(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::FlatQuotient: return "FlatQuotient";
        case ManifoldKind::Embedded: return "Embedded";
        case ManifoldKind::ProductQuotient: return "ProductQuotient";
    }
    return "?";
}

ManifoldModel::ManifoldModel(ManifoldKind kind, int ambient_dim, int intrinsic_dim)
    : kind_(kind), ambient_dim_(ambient_dim), intrinsic_dim_(intrinsic_dim) {
    if (intrinsic_dim < 2) throw DomainError("manifold dimension must be at least 2");
    if (ambient_dim < intrinsic_dim) throw DomainError("ambient dimension below intrinsic");
}

ManifoldModel& ManifoldModel::with_constraint(Constraint c) {
    constraint_ = std::move(c);
    return *this;
}

ManifoldModel& ManifoldModel::with_generator(std::string name, AffineMap map) {
    generators_.push_back({std::move(name), std::move(map)});
    neighbourhood_.reset();
    return *this;
}

ManifoldModel& ManifoldModel::with_box(Vec lo, Vec hi) {
    box_ = std::make_pair(std::move(lo), std::move(hi));
    neighbourhood_.reset();
    return *this;
}

ManifoldModel& ManifoldModel::with_canonicalizer(Canonicalizer c) {
    canonicalizer_ = std::move(c);
    return *this;
}

ManifoldModel& ManifoldModel::with_sampler(Sampler s) {
    sampler_ = std::move(s);
    return *this;
}

void ManifoldModel::set_max_word_len(int n) {
    max_word_len_ = n;
    neighbourhood_.reset();
}

double ManifoldModel::constraint_residual(const Vec& p) const {
    return constraint_ ? std::abs(constraint_->value(p)) : 0.0;
}

bool ManifoldModel::on_manifold(const Vec& p, double tol) const {
    return p.size() == ambient_dim_ && constraint_residual(p) <= tol;
}

void ManifoldModel::require_on_manifold(const Vec& p, double tol) const {
    if (p.size() != ambient_dim_) throw DomainError("point has wrong ambient dimension");
    if (constraint_residual(p) > tol) throw DomainError("point off manifold");
}

Vec ManifoldModel::project_point(const Vec& p) const {
    if (!constraint_) return p;
    Vec x = p;
    for (int it = 0; it < 50; ++it) {
        const double c = constraint_->value(x);
        if (std::abs(c) < 1e-15) break;
        const Vec g = constraint_->gradient(x);
        const double gg = g.squaredNorm();
        if (gg == 0.0) throw SingularityError("constraint gradient vanishes");
        x -= (c / gg) * g;
    }
    return x;
}

Vec ManifoldModel::normal(const Vec& p) const {
    if (!constraint_) return Vec();
    Vec n = constraint_->gradient(p);
    const double len = n.norm();
    if (len == 0.0) throw SingularityError("constraint gradient vanishes");
    return n / len;
}

Vec ManifoldModel::project_tangent(const Vec& p, const Vec& v) const {
    if (!constraint_) return v;
    const Vec n = normal(p);
    return v - n.dot(v) * n;
}

Mat ManifoldModel::tangent_basis(const Vec& p) const {
    Mat basis(ambient_dim_, intrinsic_dim_);
    int found = 0;
    for (int j = 0; j < ambient_dim_ && found < intrinsic_dim_; ++j) {
        Vec e = project_tangent(p, Vec::Unit(ambient_dim_, j));
        for (int k = 0; k < found; ++k) e -= basis.col(k).dot(e) * basis.col(k);
        const double len = e.norm();
        if (len < 1e-6) continue;
        basis.col(found++) = e / len;
    }
    if (found < intrinsic_dim_) throw SingularityError("tangent space rank deficient");
    return basis;
}

Vec ManifoldModel::sample(std::mt19937_64& rng) const {
    if (sampler_) return sampler_(rng);
    if (!box_) throw DomainError("manifold has no sampler or fundamental box");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec x(ambient_dim_);
    for (int i = 0; i < ambient_dim_; ++i)
        x(i) = box_->first(i) + unit(rng) * (box_->second(i) - box_->first(i));
    return project_point(x);
}

DeckElement ManifoldModel::canonicalize(const Vec& p) const {
    if (canonicalizer_) return canonicalizer_(p);
    return identity_element(ambient_dim_);
}

const std::vector<DeckElement>& ManifoldModel::neighbourhood() const {
    std::lock_guard lock(*neighbourhood_mutex_);
    if (neighbourhood_) return *neighbourhood_;
    auto out = std::make_shared<std::vector<DeckElement>>();
    out->push_back(identity_element(ambient_dim_));

    // Canonical points lie in the box, so only elements whose image of the
    // box meets the box can identify two of them.
    std::optional<Vec> centre;
    double reach = 0.0;
    if (box_) {
        centre = 0.5 * (box_->first + box_->second);
        reach = (box_->second - box_->first).norm() + 1e-3;
    }
    auto is_new = [&](const AffineMap& m) {
        for (const auto& e : *out)
            if ((e.map.linear - m.linear).norm() < 1e-12 && (e.map.offset - m.offset).norm() < 1e-12)
                return false;
        return true;
    };

    // Breadth-first over group elements; a word is kept only if it reaches
    // a map not produced by a shorter word.
    std::vector<DeckElement> frontier{identity_element(ambient_dim_)};
    for (int depth = 0; depth < max_word_len_ && !frontier.empty(); ++depth) {
        std::vector<DeckElement> next;
        for (const auto& node : frontier) {
            for (int g = 0; g < static_cast<int>(generators_.size()); ++g) {
                for (int pw : {1, -1}) {
                    DeckElement e = compose(generator_power(*this, g, pw), node);
                    if (centre && (e.map.apply(*centre) - *centre).norm() > reach) continue;
                    if (!is_new(e.map)) continue;
                    out->push_back(e);
                    next.push_back(std::move(e));
                }
            }
        }
        frontier = std::move(next);
    }
    neighbourhood_ = std::move(out);
    return *neighbourhood_;
}

std::pair<double, DeckElement> ManifoldModel::quotient_distance(const Vec& p, const Vec& q) const {
    const DeckElement ep = canonicalize(p);
    const DeckElement eq = canonicalize(q);
    const Vec pc = ep.map.apply(p);
    const Vec qc = eq.map.apply(q);
    double best = std::numeric_limits<double>::infinity();
    const DeckElement* arg = nullptr;
    for (const auto& d : neighbourhood()) {
        const double dist = (d.map.apply(pc) - qc).norm();
        if (dist < best) {
            best = dist;
            arg = &d;
        }
    }
    return {best, compose(inverse(eq), compose(*arg, ep))};
}

DeckElement identity_element(int dim) { return {{}, AffineMap::identity(dim)}; }

DeckElement compose(const DeckElement& outer, const DeckElement& inner) {
    DeckElement out;
    out.word = outer.word;
    for (const auto& s : inner.word) {
        if (!out.word.empty() && out.word.back().generator == s.generator) {
            out.word.back().power += s.power;
            if (out.word.back().power == 0) out.word.pop_back();
        } else {
            out.word.push_back(s);
        }
    }
    out.map = outer.map.compose(inner.map);
    return out;
}

DeckElement inverse(const DeckElement& e) {
    DeckElement out;
    for (auto it = e.word.rbegin(); it != e.word.rend(); ++it)
        out.word.push_back({it->generator, -it->power});
    out.map = e.map.inverse();
    return out;
}

DeckElement generator_power(const ManifoldModel& m, int generator, int power) {
    DeckElement out;
    if (power != 0) out.word.push_back({generator, power});
    out.map = m.deck_generators().at(generator).map.power(power);
    return out;
}

std::optional<DeckElement> reduce_point(const ManifoldModel& m, const Vec& p, const Vec& q,
                                        int max_word_len) {
    const DeckElement ep = m.canonicalize(p);
    const DeckElement eq = m.canonicalize(q);
    const Vec pc = ep.map.apply(p);
    const Vec qc = eq.map.apply(q);
    const DeckElement eq_inv = inverse(eq);
    for (const auto& d : m.neighbourhood()) {
        if ((d.map.apply(pc) - qc).norm() > kIdentityTol) continue;
        DeckElement g = compose(eq_inv, compose(d, ep));
        if (g.length() > max_word_len) continue;
        if ((g.map.apply(p) - q).norm() <= kIdentityTol) return g;
    }
    return std::nullopt;
}

std::string word_to_string(const ManifoldModel& m, const std::vector<Syllable>& word) {
    if (word.empty()) return "id";
    std::ostringstream os;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) os << ' ';
        os << m.deck_generators().at(word[i].generator).name;
        if (word[i].power != 1) os << '^' << word[i].power;
    }
    return os.str();
}

}  // namespace kg
