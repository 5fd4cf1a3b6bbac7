#include "oscred/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oscred {

WeightVector::WeightVector(std::vector<long long> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("WeightVector: need n >= 1");
    long long g = 0;
    for (long long v : p_) {
        if (v < 1) throw std::invalid_argument("WeightVector: weights must be >= 1");
        g = std::gcd(g, v);
    }
    if (g != 1) throw std::invalid_argument("WeightVector: weights must be coprime");
}

long long WeightVector::lcm() const {
    long long l = 1;
    for (long long v : p_) l = std::lcm(l, v);
    return l;
}

std::string WeightVector::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p_.size(); ++i) os << (i ? "," : "") << p_[i];
    os << ")";
    return os.str();
}

long long weighted_degree(const MultiIndex& alpha, const WeightVector& weights) {
    if (alpha.size() != weights.n())
        throw std::invalid_argument("weighted_degree: index/weight dimension mismatch");
    long long s = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < 0) throw std::invalid_argument("weighted_degree: negative exponent");
        s += weights[i] * alpha[i];
    }
    return s;
}

long long total_degree(const MultiIndex& alpha) {
    long long s = 0;
    for (long long a : alpha) s += a;
    return s;
}

namespace {

bool graded_lex_less_impl(const MultiIndex& a, const MultiIndex& b) {
    const long long da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

}  // namespace

std::size_t EigenspaceBasis::find(const MultiIndex& alpha) const {
    const auto it = std::lower_bound(indices.begin(), indices.end(), alpha, graded_lex_less_impl);
    if (it != indices.end() && *it == alpha) return std::size_t(it - indices.begin());
    return npos;
}

namespace {

void enumerate_rec(const WeightVector& p, std::size_t i, long long remaining, MultiIndex& cur,
                   std::vector<MultiIndex>& out) {
    if (i + 1 == p.n()) {
        if (remaining % p[i] == 0) {
            cur[i] = remaining / p[i];
            out.push_back(cur);
        }
        return;
    }
    for (long long a = 0; a * p[i] <= remaining; ++a) {
        cur[i] = a;
        enumerate_rec(p, i + 1, remaining - a * p[i], cur, out);
    }
}

}  // namespace

EigenspaceBasis enumerate_basis(const WeightVector& weights, long long k) {
    if (k < 0) throw std::invalid_argument("enumerate_basis: k must be >= 0");
    EigenspaceBasis basis{weights, k, {}, {}};
    MultiIndex cur(weights.n(), 0);
    enumerate_rec(weights, 0, k, cur, basis.indices);
    std::sort(basis.indices.begin(), basis.indices.end(), graded_lex_less_impl);
    basis.norms_sq.reserve(basis.indices.size());
    // k = 0 only ever carries the constant monomial; norms use k = 1 there
    for (const auto& alpha : basis.indices)
        basis.norms_sq.push_back(bargmann_norm_sq(alpha, weights, std::max<long long>(k, 1)));
    return basis;
}

std::uint64_t count_dim(const WeightVector& weights, long long k) {
    if (k < 0) throw std::invalid_argument("count_dim: k must be >= 0");
    std::vector<std::uint64_t> ways(std::size_t(k) + 1, 0);
    ways[0] = 1;
    for (std::size_t i = 0; i < weights.n(); ++i) {
        const long long p = weights[i];
        for (long long v = p; v <= k; ++v) ways[std::size_t(v)] += ways[std::size_t(v - p)];
    }
    return ways[std::size_t(k)];
}

double log_bargmann_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k) {
    if (alpha.size() != weights.n())
        throw std::invalid_argument("bargmann_norm_sq: index/weight dimension mismatch");
    if (k < 1) throw std::invalid_argument("bargmann_norm_sq: k must be >= 1");
    double s = 0.0;
    for (long long a : alpha) {
        if (a < 0) throw std::invalid_argument("bargmann_norm_sq: negative exponent");
        s += std::log(2.0 * M_PI) + std::lgamma(double(a) + 1.0) -
             (double(a) + 1.0) * std::log(double(k));
    }
    return s;
}

double bargmann_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k) {
    return std::exp(log_bargmann_norm_sq(alpha, weights, k));
}

double oscillator_eigenvalue(const MultiIndex& alpha, const WeightVector& weights, long long k) {
    if (k < 1) throw std::invalid_argument("oscillator_eigenvalue: k must be >= 1");
    return double(weighted_degree(alpha, weights)) / double(k);
}

}  // namespace oscred
