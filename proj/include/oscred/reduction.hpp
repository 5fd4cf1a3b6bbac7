#ifndef OSCRED_REDUCTION_HPP
#define OSCRED_REDUCTION_HPP

#include <vector>

#include "oscred/fock.hpp"
#include "oscred/symbols.hpp"

namespace oscred {

// The reduced space in action coordinates: Delta' = {s >= 0, sum p_i s_i = 1}
// carrying the Leray measure that eliminates one coordinate. All moment
// integrals are independent of the eliminated index (Leray invariance).
struct SimplexDomain {
    WeightVector weights;
    std::size_t eliminated;  // default n-1

    explicit SimplexDomain(WeightVector w)
        : weights(std::move(w)), eliminated(weights.n() - 1) {}
    SimplexDomain(WeightVector w, std::size_t j) : weights(std::move(w)), eliminated(j) {}
};

// Closed-form Leray moment over the weighted simplex:
//   int_{Delta'} prod s_i^{a_i} dsigma
//     = prod a_i! / ( (sum a_i + n - 1)! * prod p_i^{a_i + 1} ).
double weighted_moment(const MultiIndex& exponents, const WeightVector& weights);

// The same moment by adaptive quadrature with a chosen eliminated
// coordinate; exercises the Leray-invariance identity against the closed form.
double weighted_moment_quadrature(const MultiIndex& exponents, const SimplexDomain& domain,
                                  double rel_tol = 1e-12);

// Squared reduced norm of the descended monomial section:
//   (2pi/k)^{1/2} (2pi)^{n-1} int_{Delta'} e^{-k sum s} prod s_i^{alpha_i} dsigma,
// with the reduced measure delta_{M_r} = (2pi)^{n-1} x Leray. The measure
// carries no extra constant: that normalization is the one pinned by the
// exact dimension counts and by the compression identity below.
// Requires <p, alpha> = k. Computed by adaptive Gauss-Legendre (n <= 4).
double reduced_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k);
double log_reduced_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k);

// Universal constant of the V*V symbol law, fixed once by the n = 1
// Stirling limit: calibration = lim_{k->inf} sqrt(2) d^2(k) for p = (1).
// Along the k-scan, d_alpha^2 * (2 sum p_i^2 alpha_i / k)^{1/2} -> calibration
// with O(1/k) error, uniformly in alpha.
double stirling_calibration();

// Diagonal model of the descent map V_k in orthonormalized monomial bases:
// d_alpha = ||(z^alpha)_r|| / ||z^alpha||. W_k = diag(1/d_alpha) and the
// unitarization U_k is exactly the identity matrix (V diagonal positive).
struct ReductionMaps {
    EigenspaceBasis basis;
    std::vector<double> v_diag;
    double calibration;
};

ReductionMaps build_reduction_maps(const EigenspaceBasis& basis);

// phi(t, y) = 2t + sum_i s_i(y) (e^{-2 p_i t} - 1): the exponent governing
// invariant-state decay transverse to the level set. phi(0, y) = 0, strictly
// convex in t, positive away from t = 0.
double phi(double t, const ReducedPoint& y, const WeightVector& weights);

// min over {|t| = epsilon, y in P} of phi: linear in s at fixed t, so the
// minimum is attained at a simplex vertex. The concentration exponent C(eps).
double phi_boundary_min(double epsilon, const WeightVector& weights);

// Relative residual of the invariant-state scaling identity
// (Psi,Psi)(t,y) = e^{-k phi(t,y)} (Psi,Psi)(0,y) for Psi = z^alpha,
// evaluated in log space. Requires <p, alpha> = k.
double control_norm_check(const MultiIndex& alpha, const WeightVector& weights, long long k,
                          double t, const ReducedPoint& y);

// Integration map: fiberwise Laplace integral
//   I_k(f)(x) = (k/2pi)^{1/2} * 2pi *
//       int_R e^{-k phi(t,x)} f(s(t,x)) e^{-2t sum_i p_i} (2 sum_i p_i^2 s_i(x)) dt
// for circle-invariant action-diagonal f. The fiber density
// e^{-2t <p,1>} (2 sum p_i^2 s_i(x)) is the exact Jacobian of the Liouville
// measure in (t, P) coordinates; at t = 0 it reduces to the metric
// determinant 2 sum p_i^2 s_i. The truncation radius is grown until the
// integrand tail falls below 1e-15 of its peak.
double integrate_Ik(const PolySymbol& f, const ReducedPoint& x, const WeightVector& weights,
                    long long k);

// Relative deviation of the exact compression identity
//   (f z^a, z^a)_{C^n} = (I_k(f) V_k z^a, V_k z^a)_{M_r}
// with the left side an exact Gaussian moment and the right side quadrature.
double pres_identity_residual(const PolySymbol& f, const MultiIndex& alpha,
                              const WeightVector& weights, long long k);

// max over alpha of | d_alpha^2 (2 sum p_i^2 alpha_i / k)^{1/2} / calibration - 1 |;
// decays like O(1/k) along a k-scan.
double vstar_v_symbol_check(const EigenspaceBasis& basis);

// For a random unit state of the eigenspace, the mass fraction outside the
// tube P_eps around the level set, by action-coordinate quadrature.
std::vector<std::pair<long long, double>> concentration_scan(const WeightVector& weights,
                                                             const std::vector<long long>& ks,
                                                             double epsilon,
                                                             std::uint64_t seed = 1);

}  // namespace oscred

#endif
