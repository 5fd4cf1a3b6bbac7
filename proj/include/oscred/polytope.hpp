#ifndef OSCRED_POLYTOPE_HPP
#define OSCRED_POLYTOPE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace oscred {

// Exact rational on 64-bit integers, always reduced, positive denominator.
// Momentum values are stored as rational multiples of 2 pi, so membership
// tests never touch transcendental numbers.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return {-num, den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    auto operator<=>(const Rational& o) const {
        return (__int128)num * o.den <=> (__int128)o.num * den;
    }

    double to_double() const { return double(num) / double(den); }
    std::string to_string() const;
};

using RationalPoint = std::vector<Rational>;

// Diagonal torus action on projective space: row j of `weight_rows` holds the
// weights of the action on homogeneous coordinate j; the momentum map sends
// the j-th coordinate fixed point to 2 pi times that row.
struct TorusAction {
    std::size_t d = 1;                                  // torus rank
    std::vector<std::vector<long long>> weight_rows;    // (N+1) x d
};

// a . x <= b with rational coefficients (x in 2 pi units)
struct HalfSpace {
    std::vector<Rational> a;
    Rational b;
};

struct MomentumPolytope {
    std::size_t d = 1;
    std::vector<RationalPoint> vertices;     // deduplicated fixed-point values / 2 pi
    std::vector<HalfSpace> hull;             // half-space description
    bool contains(const RationalPoint& x) const;
};

// Momentum images of the coordinate fixed points and their convex hull
// (exact facet enumeration, d <= 3). Throws on rank-deficient weight data.
MomentumPolytope fixed_point_values(const TorusAction& action);

// Lattice points of the shifted lattice nu_base + (1/k) Z^d (2 pi units)
// inside the closed hull; the base vertex is irrelevant because all vertex
// differences are integral. Sorted lexicographically.
std::vector<RationalPoint> bs_lattice_points(const MomentumPolytope& polytope, long long k,
                                             std::size_t base_vertex = 0);

}  // namespace oscred

#endif
