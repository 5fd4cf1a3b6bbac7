#include "oscred/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "oscred/linalg.hpp"
#include "oscred/reduction.hpp"

namespace oscred {

RootOfUnity RootOfUnity::make(long long num, long long den) {
    if (den < 1) throw std::invalid_argument("RootOfUnity: order must be >= 1");
    long long j = ((num % den) + den) % den;
    if (j == 0) return {0, 1};
    const long long g = std::gcd(j, den);
    return {j / g, den / g};
}

RootOfUnity RootOfUnity::pow(long long m) const { return make(j * m, q); }

cplx RootOfUnity::value() const { return pow_value(1); }

cplx RootOfUnity::pow_value(long long m) const {
    const long long r = (((j * m) % q) + q) % q;
    const double ang = 2.0 * M_PI * double(r) / double(q);
    return {std::cos(ang), std::sin(ang)};
}

std::set<long long> divisor_supports(const WeightVector& weights) {
    std::set<long long> s(weights.values().begin(), weights.values().end());
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<long long> cur(s.begin(), s.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j)
                if (s.insert(std::gcd(cur[i], cur[j])).second) grew = true;
    }
    return s;
}

std::vector<TwistedSector> enumerate_sectors(const WeightVector& weights) {
    std::vector<TwistedSector> sectors;
    for (long long support_gcd : divisor_supports(weights)) {
        std::vector<std::size_t> inside;
        std::vector<std::size_t> outside;
        long long m = 0;
        for (std::size_t i = 0; i < weights.n(); ++i) {
            if (weights[i] % support_gcd == 0) {
                inside.push_back(i);
                m = std::gcd(m, weights[i]);
            } else {
                outside.push_back(i);
            }
        }
        // the gcd over the support family reproduces the support value
        if (m != support_gcd) continue;

        for (long long j = 0; j < support_gcd; ++j) {
            bool valid = true;
            for (std::size_t i : outside) {
                if ((j * weights[i]) % support_gcd == 0) {
                    valid = false;
                    break;
                }
            }
            if (!valid) continue;
            TwistedSector sec;
            sec.zeta = RootOfUnity::make(j, support_gcd);
            sec.support = inside;
            sec.multiplicity = m;
            sec.dim_n = (long long)inside.size() - 1;
            for (std::size_t i : outside) sec.b.push_back(sec.zeta.pow(weights[i]));
            sec.c = sec.zeta;
            sectors.push_back(std::move(sec));
        }
    }
    std::sort(sectors.begin(), sectors.end(),
              [](const TwistedSector& a, const TwistedSector& b) { return a.zeta < b.zeta; });
    return sectors;
}

cplx leading_coefficient(const TwistedSector& sector, const PolySymbol& g0,
                         const RealPolynomial& f, const WeightVector& weights) {
    const std::size_t n = weights.n();
    if (g0.n() != n) throw std::invalid_argument("leading_coefficient: dimension mismatch");
    if (sector.support.empty())
        throw std::invalid_argument("leading_coefficient: empty sector support");

    std::vector<bool> in_support(n, false);
    for (std::size_t i : sector.support) in_support[i] = true;

    // principal part of g0 restricted to the support: s_i = 0 off the support
    PolySymbol restricted(n);
    for (const auto& [key, c] : g0.terms()) {
        if (key.l != 0) continue;
        bool keep = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!in_support[i] && (key.gamma[i] > 0 || key.delta[i] > 0)) {
                keep = false;
                break;
            }
        if (keep) restricted.add_term(key, c);
    }

    const PolySymbol expanded = f.compose(restricted);

    // effective weights p_i / m on the support
    std::vector<long long> peff;
    for (std::size_t i : sector.support) peff.push_back(weights[i] / sector.multiplicity);
    const WeightVector wp(peff);

    cplx integral = 0.0;
    for (const auto& [key, c] : expanded.terms()) {
        if (key.gamma != key.delta) continue;  // residual-torus average kills angular modes
        if (key.l != 0) continue;
        MultiIndex a;
        long long atot = 0;
        for (std::size_t i : sector.support) {
            a.push_back(key.gamma[i]);
            atot += key.gamma[i];
        }
        const double scale =
            std::pow(double(sector.multiplicity), -double(atot + sector.dim_n));
        integral += c * scale * weighted_moment(a, wp);
    }

    cplx pref = 1.0 / cplx(double(sector.multiplicity));
    for (const auto& b : sector.b) pref /= (cplx(1.0) - b.value());
    return pref * std::pow(2.0 * M_PI, double(sector.dim_n)) * integral;
}

AsymptoticModel make_model(const WeightVector& weights, const PolySymbol& g0,
                           const RealPolynomial& f) {
    AsymptoticModel model{weights, enumerate_sectors(weights), {}};
    model.coeffs.reserve(model.sectors.size());
    for (const auto& sec : model.sectors)
        model.coeffs.push_back({leading_coefficient(sec, g0, f, weights)});
    return model;
}

namespace {

cplx model_eval_complex(const AsymptoticModel& model, long long k) {
    if (k < 0) throw std::invalid_argument("model_eval: k must be >= 0");
    cplx total = 0.0;
    for (std::size_t s = 0; s < model.sectors.size(); ++s) {
        const TwistedSector& sec = model.sectors[s];
        const cplx zeta_mk = sec.zeta.pow_value(-k);
        for (std::size_t l = 0; l < model.coeffs[s].size(); ++l) {
            if (model.coeffs[s][l] == cplx(0.0)) continue;
            const double expo = double(sec.dim_n) - double(l);
            if (k == 0 && expo < 0.0)
                throw std::invalid_argument(
                    "model_eval: negative k-power coefficient at k = 0");
            const double pw = std::pow(double(k) / (2.0 * M_PI), expo);
            total += zeta_mk * model.coeffs[s][l] * pw;
        }
    }
    return total;
}

}  // namespace

double model_eval(const AsymptoticModel& model, long long k) {
    const cplx v = model_eval_complex(model, k);
    const double mag = std::max(std::abs(v), 1.0);
    if (std::abs(v.imag()) > 1e-9 * mag)
        throw std::runtime_error("model_eval: unpaired sector coefficients (non-real value)");
    return v.real();
}

FitReport fit_subleading(const std::vector<std::pair<long long, double>>& exact_values,
                         const AsymptoticModel& model, long long order) {
    if (exact_values.size() < 2)
        throw std::invalid_argument("fit_subleading: need at least two samples");
    const std::size_t nk = exact_values.size();
    const std::size_t ns = model.sectors.size();

    // conjugate pairing: representative sectors carry the unknowns
    std::vector<long long> partner(ns, -1);
    std::vector<int> kind(ns, 0);  // 1 real zeta, 2 pair representative, 0 mirrored
    for (std::size_t s = 0; s < ns; ++s) {
        const RootOfUnity z = model.sectors[s].zeta;
        if (z.q <= 2) {
            kind[s] = 1;
            partner[s] = (long long)s;
            continue;
        }
        const RootOfUnity zc = RootOfUnity::make(z.q - z.j, z.q);
        long long pidx = -1;
        for (std::size_t t = 0; t < ns; ++t)
            if (model.sectors[t].zeta == zc) pidx = (long long)t;
        if (pidx < 0) throw std::invalid_argument("fit_subleading: conjugate sector missing");
        partner[s] = pidx;
        if (2 * z.j < z.q) kind[s] = 2;  // the j < q/2 member carries the unknown
    }

    // residual after the computed l = 0 part
    std::vector<double> rhs(nk);
    for (std::size_t i = 0; i < nk; ++i) {
        rhs[i] = exact_values[i].second - model_eval(model, exact_values[i].first);
    }

    struct ColRef {
        std::size_t sector;
        long long l;
        int part;  // 0 real, 1 imaginary
    };
    std::vector<ColRef> refs;
    std::vector<std::vector<double>> cols;
    for (std::size_t s = 0; s < ns; ++s) {
        if (kind[s] == 0) continue;
        for (long long l = 1; l <= order; ++l) {
            const double nd = double(model.sectors[s].dim_n);
            std::vector<double> col_re(nk), col_im(nk);
            for (std::size_t i = 0; i < nk; ++i) {
                const long long k = exact_values[i].first;
                const cplx zmk = model.sectors[s].zeta.pow_value(-k);
                const double pw = std::pow(double(k) / (2.0 * M_PI), nd - double(l));
                if (kind[s] == 1) {
                    col_re[i] = zmk.real() * pw;
                } else {
                    col_re[i] = 2.0 * zmk.real() * pw;
                    col_im[i] = -2.0 * zmk.imag() * pw;
                }
            }
            refs.push_back({s, l, 0});
            cols.push_back(std::move(col_re));
            if (kind[s] == 2) {
                refs.push_back({s, l, 1});
                cols.push_back(std::move(col_im));
            }
        }
    }

    std::size_t rank = 0;
    const std::vector<double> x = least_squares(cols, rhs, &rank);
    if (rank == 0 && !cols.empty())
        throw std::invalid_argument("fit_subleading: rank-deficient system (k list too small)");

    FitReport report{model, 0.0, rank, cols.size() - rank};
    for (std::size_t s = 0; s < ns; ++s)
        report.model.coeffs[s].resize(std::size_t(order) + 1, cplx(0.0));
    for (std::size_t c = 0; c < refs.size(); ++c) {
        const auto& r = refs[c];
        cplx add = (r.part == 0) ? cplx(x[c], 0.0) : cplx(0.0, x[c]);
        report.model.coeffs[r.sector][std::size_t(r.l)] += add;
    }
    for (std::size_t s = 0; s < ns; ++s) {
        if (kind[s] == 2) {
            const std::size_t t = std::size_t(partner[s]);
            for (long long l = 1; l <= order; ++l)
                report.model.coeffs[t][std::size_t(l)] =
                    std::conj(report.model.coeffs[s][std::size_t(l)]);
        }
    }

    // residual diagnostic over the top half of the k range
    std::vector<std::pair<long long, double>> sorted = exact_values;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = sorted.size() / 2; i < sorted.size(); ++i) {
        const double r = std::abs(sorted[i].second - model_eval(report.model, sorted[i].first));
        report.max_residual_top_half = std::max(report.max_residual_top_half, r);
    }
    return report;
}

}  // namespace oscred
