#include "oscred/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscred/quadrature.hpp"
#include "oscred/rng.hpp"
#include "oscred/wick.hpp"

namespace oscred {

double weighted_moment(const MultiIndex& exponents, const WeightVector& weights) {
    if (exponents.size() != weights.n())
        throw std::invalid_argument("weighted_moment: dimension mismatch");
    long long total = 0;
    double lg = 0.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] < 0) throw std::invalid_argument("weighted_moment: negative exponent");
        total += exponents[i];
        lg += std::lgamma(double(exponents[i]) + 1.0) -
              double(exponents[i] + 1) * std::log(double(weights[i]));
    }
    lg -= std::lgamma(double(total + (long long)weights.n() - 1) + 1.0);
    return std::exp(lg);
}

double weighted_moment_quadrature(const MultiIndex& exponents, const SimplexDomain& domain,
                                  double rel_tol) {
    const auto& p = domain.weights.values();
    auto g = [&](std::span<const double> s) {
        double v = 1.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (long long j = 0; j < exponents[i]; ++j) v *= s[i];
        return v;
    };
    return integrate_simplex(g, std::span<const long long>(p), domain.eliminated, rel_tol).value;
}

namespace {

// log of the peak value of exp(-k sum s + sum alpha_i ln s_i) over the simplex,
// attained at s = alpha / k.
double peak_log(const MultiIndex& alpha, long long k) {
    double L = 0.0;
    for (long long a : alpha) {
        L -= double(a);
        if (a > 0) L += double(a) * (std::log(double(a)) - std::log(double(k)));
    }
    return L;
}

double exponent_at(const MultiIndex& alpha, long long k, std::span<const double> s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        e -= double(k) * s[i];
        if (alpha[i] > 0) e += (s[i] > 0.0) ? double(alpha[i]) * std::log(s[i]) : -1e30;
    }
    return e;
}

}  // namespace

double log_reduced_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k) {
    if (k < 1) throw std::invalid_argument("reduced_norm_sq: k must be >= 1");
    if (weighted_degree(alpha, weights) != k)
        throw std::invalid_argument("reduced_norm_sq: alpha not in the k-eigenspace");
    const std::size_t n = weights.n();
    const double L = peak_log(alpha, k);
    auto g = [&](std::span<const double> s) { return std::exp(exponent_at(alpha, k, s) - L); };
    const QuadResult q = integrate_simplex(g, std::span<const long long>(weights.values()),
                                           n - 1, 1e-10);
    return 0.5 * std::log(2.0 * M_PI / double(k)) + double(n - 1) * std::log(2.0 * M_PI) + L +
           std::log(q.value);
}

double reduced_norm_sq(const MultiIndex& alpha, const WeightVector& weights, long long k) {
    return std::exp(log_reduced_norm_sq(alpha, weights, k));
}

namespace {

// n = 1 diagonal of V*V in closed form: d^2 = (2pi/k)^{1/2} e^{-k} k^{k+1} / (2pi k!)
double d2_line(double k) {
    return std::exp(0.5 * std::log(2.0 * M_PI / k) - k + (k + 1.0) * std::log(k) -
                    std::log(2.0 * M_PI) - std::lgamma(k + 1.0));
}

}  // namespace

double stirling_calibration() {
    static const double value = [] {
        // Richardson table through 1/k^3 on a k-doubling ladder
        double r[4];
        for (int i = 0; i < 4; ++i) r[i] = std::sqrt(2.0) * d2_line(400.0 * double(1 << i));
        for (int level = 1; level <= 3; ++level) {
            const double f = double(1 << level);
            for (int i = 0; i + level < 4; ++i) r[i] = (f * r[i + 1] - r[i]) / (f - 1.0);
        }
        return r[0];
    }();
    return value;
}

ReductionMaps build_reduction_maps(const EigenspaceBasis& basis) {
    if (basis.dim() == 0)
        throw std::invalid_argument("build_reduction_maps: empty basis");
    ReductionMaps maps{basis, {}, stirling_calibration()};
    maps.v_diag.reserve(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const double lr = log_reduced_norm_sq(basis.indices[i], basis.weights, basis.k);
        const double lb = log_bargmann_norm_sq(basis.indices[i], basis.weights, basis.k);
        maps.v_diag.push_back(std::exp(0.5 * (lr - lb)));
    }
    return maps;
}

double phi(double t, const ReducedPoint& y, const WeightVector& weights) {
    double v = 2.0 * t;
    for (std::size_t i = 0; i < weights.n(); ++i)
        v += y.s[i] * (std::exp(-2.0 * double(weights[i]) * t) - 1.0);
    return v;
}

double phi_boundary_min(double epsilon, const WeightVector& weights) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < weights.n(); ++j) {
        const double pj = double(weights[j]);
        for (double t : {epsilon, -epsilon}) {
            const double v = 2.0 * t + (std::exp(-2.0 * pj * t) - 1.0) / pj;
            best = std::min(best, v);
        }
    }
    return best;
}

double control_norm_check(const MultiIndex& alpha, const WeightVector& weights, long long k,
                          double t, const ReducedPoint& y) {
    if (weighted_degree(alpha, weights) != k)
        throw std::invalid_argument("control_norm_check: alpha not in the k-eigenspace");
    double log_lhs = 0.0, log_rhs = 0.0;
    for (std::size_t i = 0; i < weights.n(); ++i) {
        const double pi_ = double(weights[i]);
        const double si = y.s[i];
        if (si == 0.0) {
            if (alpha[i] > 0) return 0.0;  // both sides vanish identically
            log_lhs += -double(k) * si * std::exp(-2.0 * pi_ * t);
            log_rhs += -double(k) * si;
            continue;
        }
        log_lhs += double(alpha[i]) * (std::log(si) - 2.0 * pi_ * t) -
                   double(k) * si * std::exp(-2.0 * pi_ * t);
        log_rhs += double(alpha[i]) * std::log(si) - double(k) * si;
    }
    log_rhs -= double(k) * phi(t, y, weights);
    return std::abs(std::expm1(log_lhs - log_rhs));
}

namespace {

struct DiagonalTerm {
    MultiIndex a;  // s-exponents
    cplx coeff;
    long long l;
};

std::vector<DiagonalTerm> diagonal_terms(const PolySymbol& f, const WeightVector& weights) {
    if (!f.is_circle_invariant(weights))
        throw std::invalid_argument("integrate_Ik: symbol must be circle invariant");
    if (!f.is_action_diagonal())
        throw std::invalid_argument("integrate_Ik: symbol must have gamma == delta terms only");
    std::vector<DiagonalTerm> terms;
    for (const auto& [key, c] : f.terms()) {
        if (std::abs(c.imag()) > 1e-14 * std::abs(c))
            throw std::invalid_argument("integrate_Ik: diagonal symbol must be real valued");
        terms.push_back({key.gamma, c, key.l});
    }
    return terms;
}

double eval_diagonal(const std::vector<DiagonalTerm>& terms, std::span<const double> s,
                     long long k) {
    double v = 0.0;
    for (const auto& t : terms) {
        double m = t.coeff.real();
        for (long long j = 0; j < t.l; ++j) m /= double(k);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (long long j = 0; j < t.a[i]; ++j) m *= s[i];
        v += m;
    }
    return v;
}

// fiber integrand at (t; x): e^{-k phi} f(s(t,x)) e^{-2t <p,1>} (2 sum p_i^2 s_i(x))
struct FiberIntegrand {
    const std::vector<DiagonalTerm>* terms;
    const ReducedPoint* x;
    const WeightVector* weights;
    long long k;
    double psum, metric;

    FiberIntegrand(const std::vector<DiagonalTerm>* tm, const ReducedPoint* px,
                   const WeightVector* w, long long kk)
        : terms(tm), x(px), weights(w), k(kk) {
        psum = 0.0;
        metric = 0.0;
        for (std::size_t i = 0; i < w->n(); ++i) {
            psum += double((*w)[i]);
            metric += double((*w)[i]) * double((*w)[i]) * px->s[i];
        }
        metric *= 2.0;
    }

    double operator()(double t) const {
        const std::size_t n = weights->n();
        std::vector<double> st(n);
        for (std::size_t i = 0; i < n; ++i)
            st[i] = x->s[i] * std::exp(-2.0 * double((*weights)[i]) * t);
        const double fval = terms ? eval_diagonal(*terms, st, k) : 1.0;
        return std::exp(-double(k) * phi(t, *x, *weights) - 2.0 * t * psum) * fval * metric;
    }

    // log-magnitude bound used for tail truncation
    double log_envelope(double t) const {
        double b = -double(k) * phi(t, *x, *weights) - 2.0 * t * psum;
        if (terms) {
            const std::size_t n = weights->n();
            std::vector<double> st(n);
            for (std::size_t i = 0; i < n; ++i)
                st[i] = x->s[i] * std::exp(-2.0 * double((*weights)[i]) * t);
            double mag = 0.0;
            for (const auto& tm : *terms) {
                double m = std::abs(tm.coeff);
                for (std::size_t i = 0; i < n; ++i)
                    for (long long j = 0; j < tm.a[i]; ++j) m *= st[i];
                mag += m;
            }
            b += std::log(std::max(mag, 1e-300));
        }
        return b;
    }
};

double fiber_tmax(const FiberIntegrand& fi) {
    double peak = -1e300;
    for (double t = -1.0; t <= 1.0; t += 0.125) peak = std::max(peak, fi.log_envelope(t));
    double tmax = 1.0;
    while (fi.log_envelope(tmax) > peak - 36.0 || fi.log_envelope(-tmax) > peak - 36.0) {
        tmax *= 1.5;
        if (tmax > 60.0)
            throw QuadratureError("integrate_Ik: tail truncation radius exceeded", {});
    }
    return tmax;
}

}  // namespace

double integrate_Ik(const PolySymbol& f, const ReducedPoint& x, const WeightVector& weights,
                    long long k) {
    const auto terms = diagonal_terms(f, weights);
    FiberIntegrand fi(&terms, &x, &weights, k);
    const double tmax = fiber_tmax(fi);
    const QuadResult q =
        integrate_1d([&](double t) { return fi(t); }, -tmax, tmax, 1e-10);
    return std::sqrt(double(k) / (2.0 * M_PI)) * 2.0 * M_PI * q.value;
}

double pres_identity_residual(const PolySymbol& f, const MultiIndex& alpha,
                              const WeightVector& weights, long long k) {
    const auto terms = diagonal_terms(f, weights);
    const std::size_t n = weights.n();
    if (alpha.size() != n)
        throw std::invalid_argument("pres_identity_residual: dimension mismatch");
    if (weighted_degree(alpha, weights) != k)
        throw std::invalid_argument("pres_identity_residual: alpha not in the k-eigenspace");

    // left side: exact Gaussian moments, (f z^a, z^a) / ||z^a||^2
    double lhs = 0.0;
    const double logk = std::log(double(k));
    for (const auto& t : terms) {
        double lg = -double(t.l) * logk;
        for (std::size_t i = 0; i < n; ++i) {
            for (long long j = alpha[i] + 1; j <= alpha[i] + t.a[i]; ++j) lg += std::log(double(j));
            lg -= double(t.a[i]) * logk;
        }
        lhs += t.coeff.real() * std::exp(lg);
    }

    // right side: (2pi/k)^{1/2} (2pi)^{n-1} int I_k(f)(s) s^alpha e^{-k sum s} dsigma
    // divided by ||z^alpha||^2, with the alpha-peak factored out of the exponent.
    const double L = peak_log(alpha, k);
    auto g = [&](std::span<const double> s) {
        ReducedPoint pt{std::vector<double>(s.begin(), s.end()),
                        std::vector<double>(n - 1, 0.0)};
        return integrate_Ik(f, pt, weights, k) * std::exp(exponent_at(alpha, k, s) - L);
    };
    const QuadResult q =
        integrate_simplex(g, std::span<const long long>(weights.values()), n - 1, 1e-9);
    const double log_pref = 0.5 * std::log(2.0 * M_PI / double(k)) +
                            double(n - 1) * std::log(2.0 * M_PI) + L -
                            log_bargmann_norm_sq(alpha, weights, k);
    const double rhs = std::exp(log_pref) * q.value;
    return std::abs(lhs / rhs - 1.0);
}

double vstar_v_symbol_check(const EigenspaceBasis& basis) {
    if (basis.dim() < 3)
        throw std::invalid_argument("vstar_v_symbol_check: need dim >= 3");
    const double kappa = stirling_calibration();
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const double lr = log_reduced_norm_sq(basis.indices[i], basis.weights, basis.k);
        const double lb = log_bargmann_norm_sq(basis.indices[i], basis.weights, basis.k);
        double metric = 0.0;
        for (std::size_t j = 0; j < basis.weights.n(); ++j)
            metric += double(basis.weights[j]) * double(basis.weights[j]) *
                      double(basis.indices[i][j]) / double(basis.k);
        const double law = std::exp(lr - lb) * std::sqrt(2.0 * metric) / kappa;
        worst = std::max(worst, std::abs(law - 1.0));
    }
    return worst;
}

namespace {

// Tensor pass over the Duffy box of the simplex at fixed resolution,
// accumulating per-alpha masses for a shared t-range functional.
void concentration_pass(const EigenspaceBasis& basis, double epsilon, std::size_t npanels,
                        std::vector<double>& out_mass, std::vector<double>& tot_mass) {
    const WeightVector& weights = basis.weights;
    const std::size_t n = weights.n();
    const std::size_t dim = n - 1;
    const long long k = basis.k;
    const auto& rule = gauss_legendre(16);

    std::vector<double> axis, axw;
    const std::size_t pts = std::max<std::size_t>(npanels, 1) * rule.nodes.size();
    axis.reserve(pts);
    axw.reserve(pts);
    const double h = 1.0 / double(npanels);
    for (std::size_t q = 0; q < npanels; ++q)
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            axis.push_back(h * (double(q) + 0.5 + 0.5 * rule.nodes[i]));
            axw.push_back(0.5 * h * rule.weights[i]);
        }

    out_mass.assign(basis.dim(), 0.0);
    tot_mass.assign(basis.dim(), 0.0);
    std::vector<double> peaks(basis.dim());
    for (std::size_t a = 0; a < basis.dim(); ++a) peaks[a] = peak_log(basis.indices[a], k);

    std::vector<std::size_t> idx(std::max<std::size_t>(dim, 1), 0);
    std::vector<double> s(n, 0.0);
    bool done = false;
    while (!done) {
        double budget = 1.0, jac = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double xi = axis[idx[d]];
            s[d] = budget * xi / double(weights[d]);
            jac *= budget / double(weights[d]) * axw[idx[d]];
            budget *= (1.0 - xi);
        }
        s[n - 1] = budget / double(weights[n - 1]);
        jac /= double(weights[n - 1]);

        ReducedPoint pt{s, std::vector<double>(n - 1, 0.0)};
        FiberIntegrand fi(nullptr, &pt, &weights, k);
        const double tmax = fiber_tmax(fi);
        auto fint = [&](double lo, double hi) {
            return integrate_1d([&](double t) { return fi(t); }, lo, hi, 1e-9).value;
        };
        const double t_out = fint(-tmax, -epsilon) + fint(epsilon, tmax);
        const double t_tot = t_out + fint(-epsilon, epsilon);

        for (std::size_t a = 0; a < basis.dim(); ++a) {
            const double w = jac * std::exp(exponent_at(basis.indices[a], k,
                                                        std::span<const double>(s)) -
                                            peaks[a]);
            out_mass[a] += w * t_out;
            tot_mass[a] += w * t_tot;
        }

        if (dim == 0) break;
        std::size_t d = 0;
        while (d < dim && ++idx[d] == axis.size()) {
            idx[d] = 0;
            ++d;
        }
        done = (d == dim);
    }
}

}  // namespace

std::vector<std::pair<long long, double>> concentration_scan(const WeightVector& weights,
                                                             const std::vector<long long>& ks,
                                                             double epsilon, std::uint64_t seed) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("concentration_scan: epsilon must lie in (0,1)");
    std::vector<std::pair<long long, double>> result;
    for (long long k : ks) {
        const EigenspaceBasis basis = enumerate_basis(weights, k);
        if (basis.dim() == 0) continue;
        DeterministicRng rng(seed ^ (std::uint64_t(k) * 0x9e3779b97f4a7c15ull));
        std::vector<double> amp(basis.dim());
        for (auto& a : amp) a = std::norm(rng.complex_normal());

        std::vector<double> outm, totm, outm2, totm2;
        concentration_pass(basis, epsilon, 8, outm, totm);
        concentration_pass(basis, epsilon, 16, outm2, totm2);

        // per-alpha peak factors differ; amplitudes weight the normalized masses
        double num = 0.0, den = 0.0, num1 = 0.0, den1 = 0.0;
        for (std::size_t a = 0; a < basis.dim(); ++a) {
            num += amp[a] * outm2[a] / totm2[a];
            den += amp[a];
            num1 += amp[a] * outm[a] / totm[a];
            den1 += amp[a];
        }
        const double ratio = num / den;
        const double ratio1 = num1 / den1;
        if (std::abs(ratio - ratio1) > 1e-5 * std::max(std::abs(ratio), 1e-300))
            throw QuadratureError("concentration_scan: quadrature not converged", {});
        result.emplace_back(k, ratio);
    }
    return result;
}

}  // namespace oscred
