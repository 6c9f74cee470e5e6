#include "kg/closed_approx.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace kg {

namespace {

using i128 = __int128;

// floor(n / d) for d > 0.
i128 floor_div(i128 n, i128 d) {
    i128 q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

}  // namespace

std::vector<Fraction> continued_fraction_convergents(double alpha, int n,
                                                     std::int64_t max_denominator) {
    std::vector<Fraction> out;
    if (n < 1 || !std::isfinite(alpha)) return out;

    int exp = 0;
    const double mant = std::frexp(alpha, &exp);  // alpha = mant * 2^exp, |mant| in [0.5, 1)
    i128 num = static_cast<i128>(std::ldexp(mant, 53));
    exp -= 53;
    i128 den = 1;
    if (exp >= 0) {
        if (exp > 62) return out;
        num <<= exp;
    } else if (-exp <= 120) {
        den = static_cast<i128>(1) << -exp;
    } else {
        // |alpha| below 2^-67: only the integer part is representable.
        out.push_back({alpha < 0 ? -1 : 0, 1});
        return out;
    }

    // (h, k) is the previous convergent, (h_prev, k_prev) the one before.
    i128 h = 1, k = 0;
    i128 h_prev = 0, k_prev = 1;
    while (static_cast<int>(out.size()) < n && den != 0) {
        const i128 a = floor_div(num, den);
        if (k > 0 && a > max_denominator) break;
        const i128 h_next = a * h + h_prev;
        const i128 k_next = a * k + k_prev;
        if (k_next > max_denominator) break;
        if (h_next > std::numeric_limits<std::int64_t>::max() ||
            h_next < std::numeric_limits<std::int64_t>::min())
            break;
        out.push_back({static_cast<std::int64_t>(h_next), static_cast<std::int64_t>(k_next)});
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        const i128 rem = num - a * den;
        num = den;
        den = rem;
    }
    return out;
}

std::optional<Fraction> detect_rational(double x, std::int64_t max_denominator) {
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    for (const Fraction& f : continued_fraction_convergents(x, 64, max_denominator))
        if (std::abs(x - f.value()) <= tol) return f;
    return std::nullopt;
}

TorusDirection make_torus_direction(const Vec& coords, std::int64_t max_denominator) {
    TorusDirection d{coords, std::nullopt};
    if (coords.size() == 0 || coords(0) == 0.0) return d;
    std::vector<Fraction> ratios;
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
        auto r = detect_rational(coords(i) / coords(0), max_denominator);
        if (!r) return d;
        ratios.push_back(*r);
    }
    d.ratios = std::move(ratios);
    return d;
}

ApproximationSequence approximate_closed(const KillingField& k, int n) {
    if (!k.generator || !k.torus)
        throw UnsupportedError("evaluator-only field: no torus generator coordinates");
    const Vec& x = *k.generator;
    if (x.size() != 2 || x(0) == 0.0)
        throw UnsupportedError("closed approximation needs a generator (x1, x2) with x1 != 0");
    const double alpha = x(1) / x(0);

    ApproximationSequence seq;
    if (auto exact = detect_rational(alpha)) {
        seq.already_closed = true;
        seq.approximants.push_back({k, *exact});
        return seq;
    }
    for (const Fraction& f : continued_fraction_convergents(alpha, n)) {
        Vec gen(2);
        gen << x(0), x(0) * f.value();
        KillingField kn = combine_family(k.torus, gen,
                                         "closed " + std::to_string(f.p) + "/" + std::to_string(f.q));
        seq.approximants.push_back({std::move(kn), f});
    }
    return seq;
}

bool ApproximationCertificate::gaps_valid() const {
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double q = static_cast<double>(convergents[i].q);
        if (gaps[i] > 1.0 / (q * q)) return false;
        if (i > 0 && !(gaps[i] < gaps[i - 1])) return false;
    }
    return true;
}

ApproximationCertificate certify_uniform_convergence(const MetricField& g, const ManifoldModel& m,
                                                     const KillingField& k,
                                                     const ApproximationSequence& seq, int samples,
                                                     std::uint64_t seed) {
    ApproximationCertificate cert;
    if (k.generator && k.generator->size() == 2 && (*k.generator)(0) != 0.0)
        cert.alpha = (*k.generator)(1) / (*k.generator)(0);

    std::mt19937_64 rng(seed);
    std::vector<Vec> points;
    for (int i = 0; i < samples; ++i) points.push_back(m.sample(rng));

    double second_factor_sup = 0.0;
    if (k.torus && k.torus->members.size() == 2)
        for (const Vec& p : points)
            second_factor_sup = std::max(second_factor_sup, k.torus->members[1](p).norm());
    const double scale = k.generator ? std::abs((*k.generator)(0)) : 1.0;

    for (const Approximant& a : seq.approximants) {
        cert.convergents.push_back(a.slope);
        cert.gaps.push_back(std::abs(cert.alpha - a.slope.value()));
        cert.field_gap_bounds.push_back(cert.gaps.back() * scale * second_factor_sup);
        double sup_gap = 0.0;
        double min_f = std::numeric_limits<double>::infinity();
        for (const Vec& p : points) {
            const Vec kn = a.field(p);
            sup_gap = std::max(sup_gap, (kn - k(p)).norm());
            min_f = std::min(min_f, kn.dot(g(p) * kn));
        }
        cert.sup_field_gaps.push_back(sup_gap);
        cert.min_f_values.push_back(min_f);
        cert.min_f_signs.push_back(min_f < 0.0);
    }
    return cert;
}

}  // namespace kg
