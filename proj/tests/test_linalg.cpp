#include <doctest.h>

#include <cmath>

#include "oscred/linalg.hpp"
#include "oscred/rng.hpp"

using namespace oscred;

namespace {

CMatrix random_hermitian(DeterministicRng& rng, std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = rng.uniform(-2, 2);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("Jacobi eigensolver") {
    SUBCASE("known 2x2") {
        CMatrix m(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        const auto dec = jacobi_hermitian(m);
        CHECK(dec.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(dec.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("trace and Frobenius consistency on random input") {
        DeterministicRng rng(5);
        const CMatrix m = random_hermitian(rng, 24);
        const auto dec = jacobi_hermitian(m);
        double tr = 0.0, fr = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < 24; ++i) tr += m(i, i).real();
        fr = m.frobenius_norm();
        for (double lam : dec.eigenvalues) {
            s1 += lam;
            s2 += lam * lam;
        }
        CHECK(s1 == doctest::Approx(tr).epsilon(1e-11));
        CHECK(std::sqrt(s2) == doctest::Approx(fr).epsilon(1e-11));
    }
    SUBCASE("eigenpair residual") {
        DeterministicRng rng(6);
        const CMatrix m = random_hermitian(rng, 30);
        const auto dec = jacobi_hermitian(m);
        double worst = 0.0;
        for (std::size_t j = 0; j < 30; ++j) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < 30; ++i) {
                cplx tv = 0.0;
                for (std::size_t l = 0; l < 30; ++l) tv += m(i, l) * dec.vectors(l, j);
                tv -= dec.eigenvalues[j] * dec.vectors(i, j);
                r2 += std::norm(tv);
            }
            worst = std::max(worst, std::sqrt(r2));
        }
        CHECK(worst <= 1e-12 * m.frobenius_norm());
    }
    SUBCASE("non-Hermitian input rejected") {
        CMatrix m(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 0.5;
        CHECK_THROWS_AS((void)jacobi_hermitian(m), std::invalid_argument);
    }
}

TEST_CASE("spectral norm") {
    CMatrix m(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = -4.0;
    CHECK(spectral_norm(m) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("least squares") {
    SUBCASE("exact recovery") {
        std::vector<double> xs;
        for (int i = 0; i < 20; ++i) xs.push_back(0.3 + i);
        std::vector<std::vector<double>> cols(3, std::vector<double>(xs.size()));
        std::vector<double> rhs(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            cols[0][i] = 1.0;
            cols[1][i] = xs[i];
            cols[2][i] = xs[i] * xs[i];
            rhs[i] = 2.0 - 3.0 * xs[i] + 0.5 * xs[i] * xs[i];
        }
        const auto x = least_squares(cols, rhs);
        CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(x[1] == doctest::Approx(-3.0).epsilon(1e-10));
        CHECK(x[2] == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("aliased column dropped, residual still zero") {
        std::vector<std::vector<double>> cols(2, std::vector<double>(8));
        std::vector<double> rhs(8);
        for (std::size_t i = 0; i < 8; ++i) {
            cols[0][i] = double(i + 1);
            cols[1][i] = 2.0 * double(i + 1);  // collinear
            rhs[i] = 3.0 * double(i + 1);
        }
        std::size_t rank = 0;
        const auto x = least_squares(cols, rhs, &rank);
        CHECK(rank == 1);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(x[0] * cols[0][i] + x[1] * cols[1][i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
}

TEST_CASE("line fit") {
    std::vector<double> x = {1, 2, 3, 4}, y = {2, 4, 6, 8};
    CHECK(fit_line_slope(x, y) == doctest::Approx(2.0).epsilon(1e-14));
}
