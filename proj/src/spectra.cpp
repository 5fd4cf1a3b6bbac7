#include "oscred/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace oscred {

std::vector<double> hermitian_eigenvalues(const OperatorMatrix& matrix) {
    return jacobi_hermitian(matrix.entries).eigenvalues;
}

double eigenpair_residual(const CMatrix& matrix) {
    const EigenDecomposition dec = jacobi_hermitian(matrix);
    const std::size_t n = matrix.rows();
    const double scale = std::max(matrix.frobenius_norm(), 1e-300);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx tv = 0.0;
            for (std::size_t l = 0; l < n; ++l) tv += matrix(i, l) * dec.vectors(l, j);
            tv -= dec.eigenvalues[j] * dec.vectors(i, j);
            r2 += std::norm(tv);
        }
        worst = std::max(worst, std::sqrt(r2));
    }
    return worst / scale;
}

double density_sum(const OperatorMatrix& matrix, const RealPolynomial& f) {
    const auto eig = hermitian_eigenvalues(matrix);
    std::vector<double> vals(eig.size());
    for (std::size_t i = 0; i < eig.size(); ++i) vals[i] = f(eig[i]);
    double s = 0.0;
    for (double v : vals) s += v;
    return s;
}

namespace {

std::string spectrum_key(const WeightVector& weights, const PolySymbol& symbol, long long k) {
    std::ostringstream os;
    os << weights.to_string() << "|" << symbol.render() << "|" << k;
    return os.str();
}

}  // namespace

const std::vector<double>& cached_spectrum(const WeightVector& weights, const PolySymbol& symbol,
                                           long long k) {
    static std::map<std::string, std::vector<double>> cache;
    static std::mutex mtx;
    const std::string key = spectrum_key(weights, symbol, k);
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const EigenspaceBasis basis = enumerate_basis(weights, k);
        const OperatorMatrix op = lambda_toeplitz(symbol, basis);
        it = cache.emplace(key, hermitian_eigenvalues(op)).first;
    }
    return it->second;
}

DensityComparison density_compare(const WeightVector& weights, const PolySymbol& symbol,
                                  const std::vector<RealPolynomial>& f_list,
                                  const std::vector<long long>& k_list, long long fit_order) {
    if (!symbol.is_hermitian(1e-14))
        throw std::invalid_argument("density_compare: symbol must be Hermitian");
    if (k_list.size() < 4)
        throw std::invalid_argument("density_compare: need at least four k values");

    const PolySymbol g0 = average_circle(symbol, weights);

    DensityComparison out;
    out.reports.resize(k_list.size());
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        out.reports[i].k = k_list[i];
        out.reports[i].eigenvalues = cached_spectrum(weights, symbol, k_list[i]);
    }

    const std::size_t half = k_list.size() / 2;
    for (const auto& f : f_list) {
        const std::string fname = f.render();
        std::vector<std::pair<long long, double>> sums(k_list.size());
        for (std::size_t i = 0; i < k_list.size(); ++i) {
            const auto& eig = out.reports[i].eigenvalues;
            double s = 0.0;
            for (double lam : eig) s += f(lam);
            sums[i] = {k_list[i], s};
            out.reports[i].f_moments[fname] = s;
        }

        AsymptoticModel base = make_model(weights, g0, f);
        const std::vector<std::pair<long long, double>> train(sums.begin(),
                                                              sums.begin() + half);
        const FitReport fit = fit_subleading(train, base, fit_order);
        out.fitted.emplace(fname, fit.model);

        std::vector<double> logk, logr;
        double maxres = 0.0;
        for (std::size_t i = 0; i < k_list.size(); ++i) {
            const double mv = model_eval(fit.model, k_list[i]);
            const double res = std::abs(sums[i].second - mv);
            out.reports[i].model_values[fname] = mv;
            out.reports[i].residuals[fname] = res;
            if (i >= half) {
                maxres = std::max(maxres, res);
                if (res > 0.0) {
                    logk.push_back(std::log(double(k_list[i])));
                    logr.push_back(std::log(res));
                }
            }
        }
        out.max_out_residual[fname] = maxres;
        // decay order of out-of-sample residuals; meaningless at numerical floor
        double order = std::numeric_limits<double>::quiet_NaN();
        if (maxres > 1e-9 && logk.size() >= 3) order = -fit_line_slope(logk, logr);
        out.out_of_sample_order[fname] = order;
    }
    return out;
}

}  // namespace oscred
