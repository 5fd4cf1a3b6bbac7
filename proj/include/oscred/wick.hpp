#ifndef OSCRED_WICK_HPP
#define OSCRED_WICK_HPP

#include "oscred/fock.hpp"
#include "oscred/linalg.hpp"
#include "oscred/symbols.hpp"

namespace oscred {

// Compression of a multiplication operator to the joint eigenspace,
// expressed in the orthonormalized monomial basis (z^alpha / ||z^alpha||).
struct OperatorMatrix {
    EigenspaceBasis basis;
    CMatrix entries;
};

// Exact Gaussian-moment evaluation of Pi M_f Pi on the eigenspace:
// entry (beta, alpha) = sum over terms with alpha + delta = beta + gamma of
// c k^{-l} ||z^{alpha+delta}||^2 / (||z^alpha|| ||z^beta||). No quadrature.
OperatorMatrix toeplitz_matrix(const PolySymbol& f, const EigenspaceBasis& basis);

// Independent route through the normal-ordered differential-operator form:
// each term acts as k^{-|gamma|} d^gamma (z^delta . ), applied to the basis
// monomials and re-expanded. Agrees with toeplitz_matrix exactly; the
// ordering (differentiate after multiply) is the one that makes the diagonal
// of Op(s_1) equal (alpha_1 + 1)/k.
OperatorMatrix normal_ordered_matrix(const PolySymbol& f, const EigenspaceBasis& basis);

// Compression after circle-averaging the multiplicator. For polynomial
// symbols this coincides with toeplitz_matrix(f, basis): matrix elements of
// non-invariant monomials vanish identically between equal-weight states.
OperatorMatrix lambda_toeplitz(const PolySymbol& f, const EigenspaceBasis& basis);

// Spectral norm of [T_f, T_g] for each k in k_list. Both symbols must be
// circle invariant. The log-log slope across the scan is the O(1/k)
// commutator-order diagnostic.
std::vector<std::pair<long long, double>> commutator_norm_scan(const PolySymbol& f,
                                                               const PolySymbol& g,
                                                               const WeightVector& weights,
                                                               const std::vector<long long>& ks);

}  // namespace oscred

#endif
