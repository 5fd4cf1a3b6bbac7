#include "oscred/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oscred {

namespace {

long long checked(__int128 v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error(std::string("Rational overflow in ") + what);
    return (long long)v;
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(checked((__int128)num * o.den + (__int128)o.num * den, "+"),
                    checked((__int128)den * o.den, "+"));
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(checked((__int128)num * o.den - (__int128)o.num * den, "-"),
                    checked((__int128)den * o.den, "-"));
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(checked((__int128)num * o.num, "*"), checked((__int128)den * o.den, "*"));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
    return Rational(checked((__int128)num * o.den, "/"), checked((__int128)den * o.num, "/"));
}

std::string Rational::to_string() const {
    std::ostringstream os;
    os << num;
    if (den != 1) os << "/" << den;
    return os.str();
}

bool MomentumPolytope::contains(const RationalPoint& x) const {
    for (const auto& hs : hull) {
        Rational dot(0);
        for (std::size_t i = 0; i < d; ++i) dot = dot + hs.a[i] * x[i];
        if (dot > hs.b) return false;
    }
    return true;
}

namespace {

// rank of the weight matrix over Q by fraction-free elimination
std::size_t weight_rank(const std::vector<std::vector<long long>>& rows, std::size_t d) {
    std::vector<std::vector<Rational>> m;
    for (const auto& r : rows) {
        std::vector<Rational> rr;
        for (long long v : r) rr.emplace_back(v);
        m.push_back(std::move(rr));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < m.size(); ++col) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][col].num == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][col].num == 0) continue;
            const Rational f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < d; ++c) m[r][c] = m[r][c] - f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Facet candidates from vertex subsets of size d; keep those with every
// vertex on one side. Exact and robust for the small vertex sets at hand.
std::vector<HalfSpace> facet_enumeration(const std::vector<RationalPoint>& verts,
                                         std::size_t d) {
    std::vector<HalfSpace> out;
    auto push_unique = [&](HalfSpace hs) {
        // normalize by the first nonzero coefficient magnitude
        Rational scale(0);
        for (const auto& c : hs.a)
            if (c.num != 0) {
                scale = Rational(c.num < 0 ? -c.num : c.num, c.den);
                break;
            }
        if (scale.num == 0) return;
        for (auto& c : hs.a) c = c / scale;
        hs.b = hs.b / scale;
        for (const auto& existing : out)
            if (existing.a == hs.a && existing.b == hs.b) return;
        out.push_back(std::move(hs));
    };

    const std::size_t s = verts.size();
    if (d == 1) {
        Rational lo = verts[0][0], hi = verts[0][0];
        for (const auto& v : verts) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        out.push_back({{Rational(1)}, hi});
        out.push_back({{Rational(-1)}, -lo});
        return out;
    }

    std::vector<std::size_t> idx(d);
    std::vector<bool> mask(s, false);
    std::fill(mask.end() - (long)d, mask.end(), true);
    // iterate over all d-subsets via permutation of the mask
    std::sort(mask.begin(), mask.end());
    do {
        std::size_t t = 0;
        for (std::size_t i = 0; i < s; ++i)
            if (mask[i]) idx[t++] = i;

        std::vector<Rational> normal(d, Rational(0));
        Rational offset(0);
        if (d == 2) {
            const auto &p = verts[idx[0]], &q = verts[idx[1]];
            normal = {q[1] - p[1], p[0] - q[0]};
            offset = normal[0] * p[0] + normal[1] * p[1];
        } else {  // d == 3
            const auto &p = verts[idx[0]], &q = verts[idx[1]], &r = verts[idx[2]];
            const Rational u0 = q[0] - p[0], u1 = q[1] - p[1], u2 = q[2] - p[2];
            const Rational v0 = r[0] - p[0], v1 = r[1] - p[1], v2 = r[2] - p[2];
            normal = {u1 * v2 - u2 * v1, u2 * v0 - u0 * v2, u0 * v1 - u1 * v0};
            offset = normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2];
        }
        bool nonzero = false;
        for (const auto& c : normal) nonzero = nonzero || (c.num != 0);
        if (!nonzero) continue;

        bool any_above = false, any_below = false;
        for (const auto& v : verts) {
            Rational dot(0);
            for (std::size_t i = 0; i < d; ++i) dot = dot + normal[i] * v[i];
            if (dot > offset) any_above = true;
            if (dot < offset) any_below = true;
        }
        if (!any_above) push_unique({normal, offset});
        if (!any_below) {
            for (auto& c : normal) c = -c;
            push_unique({normal, -offset});
        }
    } while (std::next_permutation(mask.begin(), mask.end()));
    return out;
}

}  // namespace

MomentumPolytope fixed_point_values(const TorusAction& action) {
    if (action.d < 1 || action.d > 3)
        throw std::invalid_argument("fixed_point_values: torus rank must be 1..3");
    if (action.weight_rows.size() < action.d + 1)
        throw std::invalid_argument("fixed_point_values: need at least d+1 fixed points");
    for (const auto& r : action.weight_rows)
        if (r.size() != action.d)
            throw std::invalid_argument("fixed_point_values: ragged weight matrix");
    if (weight_rank(action.weight_rows, action.d) < action.d)
        throw std::invalid_argument("fixed_point_values: weight matrix is rank deficient");

    MomentumPolytope poly;
    poly.d = action.d;
    std::set<std::vector<long long>> seen;
    for (const auto& row : action.weight_rows) {
        if (!seen.insert(row).second) continue;  // duplicate fixed-point value
        RationalPoint v;
        for (long long x : row) v.emplace_back(x);
        poly.vertices.push_back(std::move(v));
    }
    poly.hull = facet_enumeration(poly.vertices, poly.d);
    if (poly.hull.empty())
        throw std::invalid_argument("fixed_point_values: degenerate vertex set");
    return poly;
}

std::vector<RationalPoint> bs_lattice_points(const MomentumPolytope& polytope, long long k,
                                             std::size_t base_vertex) {
    if (k < 1) throw std::invalid_argument("bs_lattice_points: k must be >= 1");
    if (base_vertex >= polytope.vertices.size())
        throw std::invalid_argument("bs_lattice_points: base vertex out of range");
    const std::size_t d = polytope.d;
    const RationalPoint& base = polytope.vertices[base_vertex];

    std::vector<long long> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        Rational mn = polytope.vertices[0][i], mx = polytope.vertices[0][i];
        for (const auto& v : polytope.vertices) {
            mn = std::min(mn, v[i]);
            mx = std::max(mx, v[i]);
        }
        // integer range of m with base_i + m/k in [mn, mx]
        const Rational mlo = (mn - base[i]) * Rational(k);
        const Rational mhi = (mx - base[i]) * Rational(k);
        lo[i] = (mlo.num >= 0) ? (mlo.num + mlo.den - 1) / mlo.den
                               : -((-mlo.num) / mlo.den);
        hi[i] = (mhi.num >= 0) ? mhi.num / mhi.den
                               : -(((-mhi.num) + mhi.den - 1) / mhi.den);
    }

    std::vector<RationalPoint> points;
    std::vector<long long> m(d, 0);
    for (std::size_t i = 0; i < d; ++i) m[i] = lo[i];
    while (true) {
        RationalPoint x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = base[i] + Rational(m[i], k);
        if (polytope.contains(x)) points.push_back(std::move(x));

        std::size_t i = 0;
        while (i < d && ++m[i] > hi[i]) {
            m[i] = lo[i];
            ++i;
        }
        if (i == d) break;
    }
    std::sort(points.begin(), points.end());
    return points;
}

}  // namespace oscred
