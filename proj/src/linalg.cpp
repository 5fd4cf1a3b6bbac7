#include "oscred/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oscred {

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("CMatrix: size mismatch in product");
    CMatrix m(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, j) += aik * rhs(k, j);
        }
    }
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("CMatrix: size mismatch in sum");
    CMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += rhs.a_[i];
    return m;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("CMatrix: size mismatch in difference");
    CMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= rhs.a_[i];
    return m;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::hermitian_defect() const {
    if (rows_ != cols_) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    const double f = frobenius_norm();
    return f == 0.0 ? 0.0 : worst / f;
}

namespace {

double offdiag_mass(const CMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_hermitian(const CMatrix& a, double tol) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("jacobi_hermitian: matrix not square");
    const double defect = a.hermitian_defect();
    if (defect > 1e-10) {
        std::ostringstream os;
        os << "jacobi_hermitian: input not Hermitian, relative defect " << defect;
        throw std::invalid_argument(os.str());
    }

    CMatrix w = a;
    // symmetrize rounding noise so the iteration sees an exactly Hermitian matrix
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = cplx(w(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx m = 0.5 * (w(i, j) + std::conj(w(j, i)));
            w(i, j) = m;
            w(j, i) = std::conj(m);
        }
    }
    CMatrix v = CMatrix::identity(n);
    const double fnorm = w.frobenius_norm();
    const double target = tol * (fnorm == 0.0 ? 1.0 : fnorm);

    for (int sweep = 0; sweep < 60 && offdiag_mass(w) > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = w(p, q);
                if (std::abs(apq) == 0.0) continue;
                const double app = w(p, p).real();
                const double aqq = w(q, q).real();
                // unitary 2x2 rotation annihilating the (p,q) entry
                const double absapq = std::abs(apq);
                const cplx phase = apq / absapq;
                const double theta = 0.5 * std::atan2(2.0 * absapq, aqq - app);
                const double c = std::cos(theta);
                const cplx s = std::sin(theta) * phase;

                for (std::size_t i = 0; i < n; ++i) {
                    const cplx wip = w(i, p), wiq = w(i, q);
                    w(i, p) = c * wip - std::conj(s) * wiq;
                    w(i, q) = s * wip + c * wiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx wpj = w(p, j), wqj = w(q, j);
                    w(p, j) = c * wpj - s * wqj;
                    w(q, j) = std::conj(s) * wpj + c * wqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(s) * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.vectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        dec.eigenvalues[j] = w(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) dec.vectors(i, j) = v(i, order[j]);
    }
    return dec;
}

double spectral_norm(const CMatrix& a) {
    // power iteration on A*A, deterministic start
    const std::size_t n = a.cols();
    if (n == 0) return 0.0;
    const CMatrix ata = a.adjoint() * a;
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = cplx(1.0 + 1.0 / double(i + 1), 0.3 * double(i % 5));
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<cplx> y(n, cplx(0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) y[i] += ata(i, j) * x[j];
        double nrm = 0.0;
        for (const auto& v : y) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        for (auto& v : y) v /= nrm;
        const double prev = lam;
        lam = nrm;
        x = std::move(y);
        if (it > 4 && std::abs(lam - prev) <= 1e-14 * std::max(1.0, lam)) break;
    }
    return std::sqrt(lam);
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                  const std::vector<double>& rhs, std::size_t* rank,
                                  double rank_tol) {
    const std::size_t m = rhs.size();
    const std::size_t nc = cols.size();
    for (const auto& c : cols)
        if (c.size() != m) throw std::invalid_argument("least_squares: ragged design matrix");

    // column-scaled, column-pivoted Householder QR
    std::vector<std::vector<double>> a = cols;
    std::vector<double> scale(nc, 1.0);
    for (std::size_t j = 0; j < nc; ++j) {
        double s = 0.0;
        for (double v : a[j]) s += v * v;
        s = std::sqrt(s);
        if (s > 0.0) {
            scale[j] = s;
            for (double& v : a[j]) v /= s;
        }
    }
    std::vector<double> b = rhs;
    std::vector<std::size_t> perm(nc);
    std::iota(perm.begin(), perm.end(), 0);

    const std::size_t kmax = std::min(m, nc);
    std::vector<double> rdiag;
    std::size_t used = 0;
    double max_pivot = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) {
        // pivot: column with largest remaining norm
        std::size_t best = k;
        double bestn = -1.0;
        for (std::size_t j = k; j < nc; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += a[j][i] * a[j][i];
            if (s > bestn) {
                bestn = s;
                best = j;
            }
        }
        std::swap(a[k], a[best]);
        std::swap(perm[k], perm[best]);
        const double colnorm = std::sqrt(std::max(bestn, 0.0));
        max_pivot = std::max(max_pivot, colnorm);
        if (colnorm <= rank_tol * std::max(max_pivot, 1e-300)) break;

        // Householder vector for column k
        double alpha = 0.0;
        for (std::size_t i = k; i < m; ++i) alpha += a[k][i] * a[k][i];
        alpha = std::sqrt(alpha);
        if (a[k][k] > 0) alpha = -alpha;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = k; i < m; ++i) v[i] = a[k][i];
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) break;
        auto apply = [&](std::vector<double>& col) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * col[i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) col[i] -= f * v[i];
        };
        for (std::size_t j = k; j < nc; ++j) apply(a[j]);
        apply(b);
        rdiag.push_back(a[k][k]);
        used = k + 1;
    }

    // back substitution on the leading used x used triangle
    std::vector<double> y(used, 0.0);
    for (std::size_t ii = used; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < used; ++j) s -= a[j][ii] * y[j];
        y[ii] = s / a[ii][ii];
    }
    std::vector<double> x(nc, 0.0);
    for (std::size_t j = 0; j < used; ++j) x[perm[j]] = y[j] / scale[perm[j]];
    if (rank) *rank = used;
    return x;
}

double fit_line_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line_slope: need at least two points");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oscred
