#include <doctest.h>

#include <cmath>

#include "oscred/rng.hpp"
#include "oscred/spectra.hpp"

using namespace oscred;

TEST_CASE("eigenvalues of reference matrices") {
    SUBCASE("identity") {
        OperatorMatrix op{enumerate_basis(WeightVector({1, 1}), 2), CMatrix::identity(3)};
        for (double lam : hermitian_eigenvalues(op))
            CHECK(lam == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("off-diagonal 2x2") {
        CMatrix m(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        OperatorMatrix op{enumerate_basis(WeightVector({1, 1}), 1), m};
        const auto eig = hermitian_eigenvalues(op);
        CHECK(eig[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(eig[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("lambda-Toeplitz of s_1 at unit weights, k = 1") {
        const EigenspaceBasis basis = enumerate_basis(WeightVector({1, 1}), 1);
        const auto eig = hermitian_eigenvalues(lambda_toeplitz(PolySymbol::action(2, 0), basis));
        REQUIRE(eig.size() == 2);
        CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(eig[1] == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("non-Hermitian input rejected with measured defect") {
        CMatrix m(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 0.25;
        OperatorMatrix op{enumerate_basis(WeightVector({1, 1}), 1), m};
        CHECK_THROWS_WITH_AS((void)hermitian_eigenvalues(op),
                             doctest::Contains("defect"), std::invalid_argument);
    }
}

TEST_CASE("spectral sums") {
    const WeightVector w({1, 2});
    const PolySymbol s1 = PolySymbol::action(2, 0);
    SUBCASE("f = 1 counts the dimension") {
        const EigenspaceBasis basis = enumerate_basis(w, 20);
        CHECK(density_sum(lambda_toeplitz(s1, basis), RealPolynomial({1.0})) ==
              doctest::Approx(double(basis.dim())).epsilon(1e-12));
    }
    SUBCASE("f = id equals (k/2+1)^2/k on even k") {
        for (long long k : {10, 20, 40}) {
            const EigenspaceBasis basis = enumerate_basis(w, k);
            const double s = density_sum(lambda_toeplitz(s1, basis),
                                         RealPolynomial({0.0, 1.0}));
            const double expected = std::pow(double(k) / 2.0 + 1.0, 2) / double(k);
            CHECK(s == doctest::Approx(expected).epsilon(1e-11));
        }
    }
    SUBCASE("f = x^2 equals the squared Frobenius norm") {
        DeterministicRng rng(3);
        const EigenspaceBasis basis = enumerate_basis(w, 16);
        PolySymbol f(2);
        f.add_term({{2, 0}, {0, 1}, 0}, cplx(0.7, 0.2));
        f = f + f.adjoint() + PolySymbol::action(2, 0);
        const OperatorMatrix op = lambda_toeplitz(f, basis);
        const double frob = op.entries.frobenius_norm();
        CHECK(density_sum(op, RealPolynomial({0.0, 0.0, 1.0})) ==
              doctest::Approx(frob * frob).epsilon(1e-10));
    }
    SUBCASE("power traces match eigenvalue power sums") {
        const EigenspaceBasis basis = enumerate_basis(w, 14);
        PolySymbol f(2);
        f.add_term({{2, 0}, {0, 1}, 0}, cplx(1.0, -0.5));
        f = f + f.adjoint();
        const OperatorMatrix op = lambda_toeplitz(f, basis);
        const auto eig = hermitian_eigenvalues(op);
        CMatrix acc = CMatrix::identity(basis.dim());
        for (int power = 1; power <= 3; ++power) {
            acc = acc * op.entries;
            double tr = 0.0;
            for (std::size_t i = 0; i < basis.dim(); ++i) tr += acc(i, i).real();
            double es = 0.0;
            for (double lam : eig) es += std::pow(lam, power);
            CHECK(es == doctest::Approx(tr).epsilon(1e-8));
        }
    }
}

TEST_CASE("conjugation invariance of spectra") {
    const WeightVector w({1, 2});
    const EigenspaceBasis basis = enumerate_basis(w, 12);
    const OperatorMatrix op = lambda_toeplitz(PolySymbol::action(2, 0), basis);
    // the unitarized descent map is the identity in these bases
    const CMatrix u = CMatrix::identity(basis.dim());
    const CMatrix conj = u * op.entries * u.adjoint();
    const auto e1 = hermitian_eigenvalues(op);
    const auto e2 = hermitian_eigenvalues({basis, conj});
    for (std::size_t i = 0; i < e1.size(); ++i) CHECK(e1[i] == e2[i]);

    SUBCASE("general unitary conjugation preserves spectra numerically") {
        DeterministicRng rng(8);
        CMatrix h(basis.dim(), basis.dim());
        for (std::size_t i = 0; i < basis.dim(); ++i)
            for (std::size_t j = i; j < basis.dim(); ++j) {
                h(i, j) = cplx(rng.uniform(-1, 1), i == j ? 0.0 : rng.uniform(-1, 1));
                h(j, i) = std::conj(h(i, j));
            }
        const CMatrix q = jacobi_hermitian(h).vectors;
        const auto e3 = hermitian_eigenvalues({basis, q * op.entries * q.adjoint()});
        for (std::size_t i = 0; i < e1.size(); ++i)
            CHECK(e3[i] == doctest::Approx(e1[i]).epsilon(1e-10));
    }
}

TEST_CASE("spectrum stays in the principal-symbol bracket up to O(1/k)") {
    const WeightVector w({1, 2});
    const PolySymbol s1 = PolySymbol::action(2, 0);
    // g0 = s_1 ranges over [0, 1] on the weighted simplex
    std::vector<double> lk, lv;
    for (long long k : {16, 32, 64}) {
        const auto& eig = cached_spectrum(w, s1, k);
        const double viol = std::max({0.0, -eig.front(), eig.back() - 1.0});
        CHECK(viol > 0.0);
        lk.push_back(std::log(double(k)));
        lv.push_back(std::log(viol));
    }
    CHECK(-fit_line_slope(lk, lv) >= 0.8);
}

TEST_CASE("density comparison harness") {
    SUBCASE("manifold case p = (1,1): single sector, clean decay") {
        const WeightVector w({1, 1});
        std::vector<long long> ks;
        for (long long k = 8; k <= 40; k += 2) ks.push_back(k);
        const DensityComparison cmp = density_compare(
            w, PolySymbol::action(2, 0), {RealPolynomial({0.0, 1.0})}, ks, 2);
        // exact: sum (a+1)/k over a = 0..k equals k/2 + 3/2 + 1/k
        for (const auto& rep : cmp.reports) {
            const double expected =
                double(rep.k) / 2.0 + 1.5 + 1.0 / double(rep.k);
            CHECK(rep.f_moments.at("1*x") == doctest::Approx(expected).epsilon(1e-11));
            CHECK(rep.residuals.at("1*x") <= 1e-8);
        }
        // leading coefficient is the moment pi/... : (k/2pi) * I0 = k/2
        const auto& model = cmp.fitted.at("1*x");
        for (std::size_t s = 0; s < model.sectors.size(); ++s)
            if (model.sectors[s].zeta.is_one())
                CHECK(std::abs(model.coeffs[s][0] - cplx(M_PI)) <= 1e-13);
    }
    SUBCASE("requires a Hermitian symbol") {
        const WeightVector w({1, 1});
        CHECK_THROWS_AS(density_compare(w, parse_symbol("z(1)", 2),
                                        {RealPolynomial({1.0})}, {8, 10, 12, 14}, 1),
                        std::invalid_argument);
    }
    SUBCASE("non-diagonal invariant symbol: computed leading term, small residual") {
        // symbol s_1 + zb(1)^2 z(2) + zb(2) z(1)^2 on p = (1,2): no closed-form
        // eigenvalues. For f = x^2 the angular average of g0^2 picks up the
        // hopping term: I0(1) = 2pi ( m(2,0) + 2 m(2,1) ) = 5 pi / 12 with
        // m the simplex moments 1/6 and 1/48.
        const WeightVector w({1, 2});
        const PolySymbol sym =
            PolySymbol::action(2, 0) + parse_symbol("zb(1)*zb(1)*z(2) + zb(2)*z(1)*z(1)", 2);
        std::vector<long long> ks;
        for (long long k = 20; k <= 120; k += 4) ks.push_back(k);
        const DensityComparison cmp =
            density_compare(w, sym, {RealPolynomial({0.0, 0.0, 1.0})}, ks, 2);
        const auto& model = cmp.fitted.at("1*x^2");
        for (std::size_t s = 0; s < model.sectors.size(); ++s) {
            if (model.sectors[s].zeta.is_one())
                CHECK(std::abs(model.coeffs[s][0] - cplx(5.0 * M_PI / 12.0)) <= 1e-12);
            else
                CHECK(std::abs(model.coeffs[s][0]) <= 1e-14);  // g0 restricts to 0
        }
        // out-of-sample agreement, relative to the sums themselves
        for (const auto& rep : cmp.reports) {
            if (rep.k < 80) continue;
            CHECK(rep.residuals.at("1*x^2") <= 2e-3 * rep.f_moments.at("1*x^2"));
        }
    }
}
