#ifndef OSCRED_LINALG_HPP
#define OSCRED_LINALG_HPP

#include <complex>
#include <vector>

namespace oscred {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. Small sizes (dim <= a few hundred),
// value semantics throughout.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    CMatrix adjoint() const;
    CMatrix operator*(const CMatrix& rhs) const;
    CMatrix operator+(const CMatrix& rhs) const;
    CMatrix operator-(const CMatrix& rhs) const;
    CMatrix& operator*=(cplx s);

    double frobenius_norm() const;
    // max_ij |a_ij - conj(a_ji)| scaled by the Frobenius norm; 0 for Hermitian
    double hermitian_defect() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    CMatrix vectors;                  // column j pairs with eigenvalues[j]
};

// Cyclic Jacobi for Hermitian matrices. Sweeps until the off-diagonal
// Frobenius mass drops below tol * ||A||_F. Throws std::invalid_argument
// on non-Hermitian input (defect reported in the message).
EigenDecomposition jacobi_hermitian(const CMatrix& a, double tol = 1e-13);

// Spectral norm (largest singular value); for Hermitian/anti-Hermitian
// input this is max |eigenvalue|.
double spectral_norm(const CMatrix& a);

// Least squares min ||Ax - b||_2 by Householder QR with column pivoting.
// Columns whose pivot falls below rank_tol * max_pivot are dropped (their
// coefficients are returned as zero); `rank` reports the retained count.
std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                  const std::vector<double>& rhs,
                                  std::size_t* rank = nullptr,
                                  double rank_tol = 1e-11);

// Slope of the least-squares line through (x_i, y_i).
double fit_line_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oscred

#endif
