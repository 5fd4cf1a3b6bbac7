#ifndef OSCRED_FOCK_HPP
#define OSCRED_FOCK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace oscred {

// Coprime positive integer weights of the circle action; the oscillator is
// H = sum_i p_i |z_i|^2.
class WeightVector {
public:
    explicit WeightVector(std::vector<long long> p);

    std::size_t n() const { return p_.size(); }
    long long operator[](std::size_t i) const { return p_[i]; }
    const std::vector<long long>& values() const { return p_; }
    long long lcm() const;

    bool operator==(const WeightVector& o) const { return p_ == o.p_; }
    std::string to_string() const;

private:
    std::vector<long long> p_;
};

using MultiIndex = std::vector<long long>;

long long weighted_degree(const MultiIndex& alpha, const WeightVector& weights);
long long total_degree(const MultiIndex& alpha);

// Monomial basis of the joint eigenspace: all alpha with <p, alpha> = k.
// Order is graded lexicographic (|alpha| ascending, then lex ascending),
// fixed so matrices are reproducible bit for bit.
struct EigenspaceBasis {
    WeightVector weights;
    long long k = 0;
    std::vector<MultiIndex> indices;
    std::vector<double> norms_sq;  // Bargmann squared norms, matching order

    std::size_t dim() const { return indices.size(); }
    // position of alpha in `indices`, or npos
    std::size_t find(const MultiIndex& alpha) const;
    static constexpr std::size_t npos = std::size_t(-1);
};

EigenspaceBasis enumerate_basis(const WeightVector& weights, long long k);

// O(n k) dynamic-programming count of |enumerate_basis(weights, k)|.
std::uint64_t count_dim(const WeightVector& weights, long long k);

// ||z^alpha||^2 = prod_i 2 pi alpha_i! / k^(alpha_i + 1), measured against
// the Liouville measure prod ds_i dtheta_i.
double bargmann_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k);
double log_bargmann_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k);

// <p, alpha> / k; equals 1 on every basis element of the eigenspace.
double oscillator_eigenvalue(const MultiIndex& alpha, const WeightVector& weights, long long k);

}  // namespace oscred

#endif
