#ifndef OSCRED_SECTORS_HPP
#define OSCRED_SECTORS_HPP

#include <complex>
#include <set>
#include <vector>

#include "oscred/fock.hpp"
#include "oscred/symbols.hpp"

namespace oscred {

// zeta = e^{2 pi i j / q} with gcd(j, q) = 1; powers are taken in modular
// arithmetic so zeta^{-k} never accumulates phase drift.
struct RootOfUnity {
    long long j = 0;
    long long q = 1;

    static RootOfUnity make(long long num, long long den);  // reduces the fraction
    bool is_one() const { return j == 0; }
    RootOfUnity pow(long long m) const;  // zeta^m, reduced
    cplx value() const;                  // complex double rendering
    cplx pow_value(long long m) const;   // zeta^m as complex double, exact angle
    bool operator==(const RootOfUnity& o) const { return j == o.j && q == o.q; }
    bool operator<(const RootOfUnity& o) const { return std::pair(q, j) < std::pair(o.q, o.j); }
};

// One twisted sector: zeta with its support I = {i : zeta^{p_i} = 1},
// multiplicity m = gcd{p_i : i in I}, dimension n(zeta) = |I| - 1,
// normal eigenvalues b_i = zeta^{p_i} for i outside the support, and
// character c = zeta.
struct TwistedSector {
    RootOfUnity zeta;
    std::vector<std::size_t> support;
    long long multiplicity = 1;
    long long dim_n = 0;
    std::vector<RootOfUnity> b;
    RootOfUnity c;
};

// All gcds of nonempty subfamilies of the weights, by closure under gcd.
std::set<long long> divisor_supports(const WeightVector& weights);

// The full sector list: for each support value, the zeta with zeta^support = 1
// and zeta^{p_i} != 1 off the support set. The zeta = 1 sector comes first;
// the union over supports is exactly the singular set G, disjointly.
std::vector<TwistedSector> enumerate_sectors(const WeightVector& weights);

// Leading coefficient of a sector:
//   I_0(zeta) = 1/m * prod_{i notin I} (1 - zeta^{p_i})^{-1}
//               * (2pi)^{n(zeta)} * int f(g0) over the support simplex,
// where the integral expands f(g0) restricted to the support coordinates
// (s_i = 0 off the support, angle-dependent terms average to zero) and each
// monomial s^a contributes m^{-(|a| + n(zeta))} * weighted_moment(a, p_I / m).
// The m-power scaling evaluates g0 at the true support simplex
// {sum_I p_i s_i = 1} while the effective weights p_i/m carry the orbifold
// normalization that reproduces exact dimension counts.
cplx leading_coefficient(const TwistedSector& sector, const PolySymbol& g0,
                         const RealPolynomial& f, const WeightVector& weights);

// Per-sector coefficient stacks I_l(zeta). The model value is
//   sum_zeta zeta^{-k} sum_l (k/2pi)^{n(zeta) - l} I_l(zeta),
// i.e. coefficients are attached to descending powers of k/2pi starting at
// the sector dimension. l = 0 entries are computed; l >= 1 entries fitted.
struct AsymptoticModel {
    WeightVector weights;
    std::vector<TwistedSector> sectors;
    std::vector<std::vector<cplx>> coeffs;  // coeffs[s][l]
};

AsymptoticModel make_model(const WeightVector& weights, const PolySymbol& g0,
                           const RealPolynomial& f);

// Evaluate at k; zeta^{-k} exactly via (j k mod q). Throws when the
// imaginary part exceeds 1e-9 of the magnitude (unpaired sector data).
double model_eval(const AsymptoticModel& model, long long k);

struct FitReport {
    AsymptoticModel model;
    double max_residual_top_half = 0.0;   // on the fitted sample
    std::size_t rank = 0;                 // retained design columns
    std::size_t dropped_columns = 0;      // aliased/rank-deficient columns
};

// Least-squares fit of I_l (1 <= l <= order) for every sector, holding the
// computed I_0 fixed. Conjugate sector pairs share conjugated coefficients so
// the model stays real. Aliased design columns (e.g. single-residue k lists)
// are dropped by pivoted QR. Throws on an underdetermined system.
FitReport fit_subleading(const std::vector<std::pair<long long, double>>& exact_values,
                         const AsymptoticModel& model, long long order);

}  // namespace oscred

#endif
