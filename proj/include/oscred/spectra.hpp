#ifndef OSCRED_SPECTRA_HPP
#define OSCRED_SPECTRA_HPP

#include <map>
#include <string>
#include <vector>

#include "oscred/sectors.hpp"
#include "oscred/wick.hpp"

namespace oscred {

// Sorted eigenvalues of a Hermitian operator matrix (cyclic Jacobi).
// Rejects matrices whose Hermitian defect exceeds 1e-10.
std::vector<double> hermitian_eigenvalues(const OperatorMatrix& matrix);

// max_j ||T v_j - lambda_j v_j|| / ||T||_F over the eigenpairs.
double eigenpair_residual(const CMatrix& matrix);

// sum_i f(lambda_i)
double density_sum(const OperatorMatrix& matrix, const RealPolynomial& f);

struct SpectralDensityReport {
    long long k = 0;
    std::vector<double> eigenvalues;
    std::map<std::string, double> f_moments;     // rendered f -> exact sum
    std::map<std::string, double> model_values;  // rendered f -> model value
    std::map<std::string, double> residuals;
};

struct DensityComparison {
    std::vector<SpectralDensityReport> reports;          // one per k
    std::map<std::string, AsymptoticModel> fitted;       // rendered f -> model
    std::map<std::string, double> out_of_sample_order;   // log-log residual slope
    std::map<std::string, double> max_out_residual;
};

// Builds lambda-Toeplitz matrices for every k (spectra equal reduced-operator
// spectra: the unitarization is the identity in these bases), computes exact
// spectral sums for each test polynomial, computes the sector model with
// computed leading coefficients and coefficients up to fit_order fitted on
// the first half of k_list, and reports out-of-sample residuals on the
// second half together with their decay order.
DensityComparison density_compare(const WeightVector& weights, const PolySymbol& symbol,
                                  const std::vector<RealPolynomial>& f_list,
                                  const std::vector<long long>& k_list, long long fit_order);

// Process-wide spectrum cache keyed by (weights, symbol, k); k scans touch
// each matrix once. Thread-safe.
const std::vector<double>& cached_spectrum(const WeightVector& weights, const PolySymbol& symbol,
                                           long long k);

}  // namespace oscred

#endif
