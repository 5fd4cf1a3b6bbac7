#include "oscred/wick.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace oscred {

namespace {

// log of prod_{j=a+1..a+m} j, the rising factorial ratio (a+m)!/a!;
// exact integer factors, summed in log space.
double log_rising(long long a, long long m) {
    double s = 0.0;
    for (long long j = a + 1; j <= a + m; ++j) s += std::log(double(j));
    return s;
}

void check_symbol(const PolySymbol& f, const EigenspaceBasis& basis) {
    if (f.n() != basis.weights.n())
        throw std::invalid_argument("wick: symbol dimension does not match basis");
}

}  // namespace

OperatorMatrix toeplitz_matrix(const PolySymbol& f, const EigenspaceBasis& basis) {
    check_symbol(f, basis);
    const std::size_t dim = basis.dim();
    const std::size_t n = basis.weights.n();
    const double logk = std::log(double(std::max<long long>(basis.k, 1)));
    OperatorMatrix op{basis, CMatrix(dim, dim)};

    for (const auto& [key, coeff] : f.terms()) {
        for (std::size_t col = 0; col < dim; ++col) {
            const MultiIndex& alpha = basis.indices[col];
            MultiIndex beta(n);
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                beta[i] = alpha[i] + key.delta[i] - key.gamma[i];
                if (beta[i] < 0) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            const std::size_t row = basis.find(beta);
            if (row == EigenspaceBasis::npos) continue;

            // ||z^{alpha+delta}||^2 / (||z^alpha|| ||z^beta||)
            //   = k^{-(|gamma|+|delta|)/2} prod_i sqrt( R1_i R2_i ) with
            //   R1 = (alpha+delta)!/alpha!, R2 = (alpha+delta)!/beta!
            double lg = 0.0;
            long long gnorm = 0, dnorm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                lg += 0.5 * (log_rising(alpha[i], key.delta[i]) +
                             log_rising(beta[i], key.gamma[i]));
                gnorm += key.gamma[i];
                dnorm += key.delta[i];
            }
            lg -= (double(key.l) + 0.5 * double(gnorm + dnorm)) * logk;
            op.entries(row, col) += coeff * std::exp(lg);
        }
    }
    return op;
}

OperatorMatrix normal_ordered_matrix(const PolySymbol& f, const EigenspaceBasis& basis) {
    check_symbol(f, basis);
    const std::size_t dim = basis.dim();
    const std::size_t n = basis.weights.n();
    const double logk = std::log(double(std::max<long long>(basis.k, 1)));
    OperatorMatrix op{basis, CMatrix(dim, dim)};

    for (const auto& [key, coeff] : f.terms()) {
        for (std::size_t col = 0; col < dim; ++col) {
            const MultiIndex& alpha = basis.indices[col];
            // multiply by z^delta, then apply k^{-|gamma|} d^gamma
            MultiIndex beta(n);
            double logfall = 0.0;  // falling factorial from differentiation
            long long gnorm = 0;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                const long long m = alpha[i] + key.delta[i];
                if (m < key.gamma[i]) {
                    ok = false;
                    break;
                }
                beta[i] = m - key.gamma[i];
                logfall += log_rising(beta[i], key.gamma[i]);
                gnorm += key.gamma[i];
            }
            if (!ok) continue;
            const std::size_t row = basis.find(beta);
            if (row == EigenspaceBasis::npos) continue;

            // change to orthonormalized monomials: * ||z^beta|| / ||z^alpha||
            double lg = logfall - (double(key.l) + double(gnorm)) * logk;
            for (std::size_t i = 0; i < n; ++i) {
                if (beta[i] >= alpha[i])
                    lg += 0.5 * log_rising(alpha[i], beta[i] - alpha[i]);
                else
                    lg -= 0.5 * log_rising(beta[i], alpha[i] - beta[i]);
            }
            lg -= 0.5 * double(total_degree(beta) - total_degree(alpha)) * logk;
            op.entries(row, col) += coeff * std::exp(lg);
        }
    }
    return op;
}

OperatorMatrix lambda_toeplitz(const PolySymbol& f, const EigenspaceBasis& basis) {
    return toeplitz_matrix(average_circle(f, basis.weights), basis);
}

std::vector<std::pair<long long, double>> commutator_norm_scan(const PolySymbol& f,
                                                               const PolySymbol& g,
                                                               const WeightVector& weights,
                                                               const std::vector<long long>& ks) {
    if (!f.is_circle_invariant(weights) || !g.is_circle_invariant(weights))
        throw std::invalid_argument("commutator_norm_scan: symbols must be circle invariant");
    std::vector<std::pair<long long, double>> out;
    out.reserve(ks.size());
    for (long long k : ks) {
        const EigenspaceBasis basis = enumerate_basis(weights, k);
        const CMatrix tf = toeplitz_matrix(f, basis).entries;
        const CMatrix tg = toeplitz_matrix(g, basis).entries;
        const CMatrix comm = tf * tg - tg * tf;
        out.emplace_back(k, spectral_norm(comm));
    }
    return out;
}

}  // namespace oscred
