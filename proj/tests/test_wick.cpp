#include <doctest.h>

#include <cmath>

#include "oscred/rng.hpp"
#include "oscred/wick.hpp"

using namespace oscred;

namespace {

PolySymbol random_symbol(DeterministicRng& rng, std::size_t n, long long max_degree) {
    PolySymbol f(n);
    const int nterms = int(rng.uniform_int(1, 4));
    for (int t = 0; t < nterms; ++t) {
        MultiIndex gamma(n, 0), delta(n, 0);
        const long long deg = rng.uniform_int(0, max_degree);
        for (long long d = 0; d < deg; ++d) {
            const std::size_t i = std::size_t(rng.uniform_int(0, (long long)n - 1));
            if (rng.next_double() < 0.5) gamma[i] += 1;
            else delta[i] += 1;
        }
        f.add_term({gamma, delta, rng.uniform_int(0, 2)},
                   cplx(rng.uniform(-2, 2), rng.uniform(-2, 2)));
    }
    if (f.empty()) f = PolySymbol::constant(n, 1.0);
    return f;
}

double max_entry_dev(const CMatrix& a, const CMatrix& b) {
    double scale = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            scale = std::max(scale, std::abs(a(i, j)));
            dev = std::max(dev, std::abs(a(i, j) - b(i, j)));
        }
    return dev / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("single hopping term, unit weights") {
    const WeightVector w({1, 1});
    const EigenspaceBasis basis = enumerate_basis(w, 1);  // order: (0,1), (1,0)
    const OperatorMatrix op = toeplitz_matrix(parse_symbol("zb(1)*z(2)", 2), basis);
    const std::size_t col = basis.find({1, 0});
    const std::size_t row = basis.find({0, 1});
    CHECK(std::abs(op.entries(row, col) - cplx(1.0)) <= 1e-14);
    CHECK(std::abs(op.entries(col, row)) == 0.0);
    CHECK(std::abs(op.entries(row, row)) == 0.0);
}

TEST_CASE("action symbol is diagonal (alpha_1 + 1)/k") {
    const WeightVector w({1, 2});
    const long long k = 6;
    const EigenspaceBasis basis = enumerate_basis(w, k);
    const OperatorMatrix op = toeplitz_matrix(PolySymbol::action(2, 0), basis);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        for (std::size_t j = 0; j < basis.dim(); ++j) {
            const double expected =
                (i == j) ? double(basis.indices[i][0] + 1) / double(k) : 0.0;
            CHECK(std::abs(op.entries(i, j) - expected) <= 1e-13);
        }
    }
}

TEST_CASE("unit symbol compresses to the identity") {
    const EigenspaceBasis basis = enumerate_basis(WeightVector({2, 3}), 12);
    const OperatorMatrix op = toeplitz_matrix(PolySymbol::constant(2, 1.0), basis);
    CHECK(max_entry_dev(op.entries, CMatrix::identity(basis.dim())) <= 1e-14);
}

TEST_CASE("normal-ordered route equals Gaussian moments exactly") {
    DeterministicRng rng(2024);
    const std::vector<std::vector<long long>> ps = {{1, 1}, {1, 2}, {2, 3}, {2, 4, 3}};
    for (int trial = 0; trial < 30; ++trial) {
        const WeightVector w(ps[std::size_t(trial) % ps.size()]);
        long long k = rng.uniform_int(6, 40);
        const EigenspaceBasis basis = enumerate_basis(w, k);
        if (basis.dim() == 0) continue;
        const PolySymbol f = random_symbol(rng, w.n(), 4);
        const OperatorMatrix a = toeplitz_matrix(f, basis);
        const OperatorMatrix b = normal_ordered_matrix(f, basis);
        CHECK(max_entry_dev(a.entries, b.entries) <= 1e-13);
    }
}

TEST_CASE("hermiticity and adjoints") {
    DeterministicRng rng(77);
    const WeightVector w({1, 2});
    const EigenspaceBasis basis = enumerate_basis(w, 14);
    for (int trial = 0; trial < 10; ++trial) {
        const PolySymbol f = random_symbol(rng, 2, 4);
        const OperatorMatrix tf = toeplitz_matrix(f, basis);
        const OperatorMatrix tfa = toeplitz_matrix(f.adjoint(), basis);
        CHECK(max_entry_dev(tfa.entries, tf.entries.adjoint()) <= 1e-13);

        const PolySymbol h = f + f.adjoint();
        CHECK(toeplitz_matrix(h, basis).entries.hermitian_defect() <= 1e-12);
    }
}

TEST_CASE("weight conservation kills net-weight monomials") {
    const WeightVector w({1, 2});
    const EigenspaceBasis basis = enumerate_basis(w, 8);
    // <p, delta - gamma> = 1 for zb(1)*z(2)
    const OperatorMatrix op = toeplitz_matrix(parse_symbol("zb(1)*z(2)", 2), basis);
    CHECK(op.entries.frobenius_norm() == 0.0);
}

TEST_CASE("Toeplitz positivity for nonnegative action polynomials") {
    const WeightVector w({1, 2});
    const EigenspaceBasis basis = enumerate_basis(w, 10);
    const OperatorMatrix op =
        toeplitz_matrix(parse_symbol("2*s(1)*s(1) + s(2)", 2), basis);
    const auto eig = jacobi_hermitian(op.entries).eigenvalues;
    CHECK(eig.front() >= -1e-12);
}

TEST_CASE("lambda compression") {
    const WeightVector w12({1, 2});
    const EigenspaceBasis basis = enumerate_basis(w12, 10);
    SUBCASE("non-invariant symbol averages to zero") {
        const OperatorMatrix op = lambda_toeplitz(parse_symbol("z(1)", 2),
                                                  enumerate_basis(WeightVector({1, 1}), 5));
        CHECK(op.entries.frobenius_norm() == 0.0);
    }
    SUBCASE("invariant symbol unchanged") {
        const PolySymbol s1 = PolySymbol::action(2, 0);
        CHECK(max_entry_dev(lambda_toeplitz(s1, basis).entries,
                            toeplitz_matrix(s1, basis).entries) == 0.0);
    }
    SUBCASE("weight bookkeeping drops the first term") {
        const PolySymbol f = parse_symbol("zb(1)*z(2) + s(2)", 2);
        CHECK(max_entry_dev(lambda_toeplitz(f, basis).entries,
                            toeplitz_matrix(parse_symbol("s(2)", 2), basis).entries) <=
              1e-14);
    }
}

TEST_CASE("commutator norms") {
    const WeightVector w({1, 2});
    const PolySymbol s1 = PolySymbol::action(2, 0);
    const PolySymbol s2 = PolySymbol::action(2, 1);
    SUBCASE("commuting diagonals give zero") {
        for (const auto& [k, nrm] : commutator_norm_scan(s1, s2, w, {8, 16}))
            CHECK(nrm <= 1e-14);
        for (const auto& [k, nrm] : commutator_norm_scan(s1, s1, w, {8, 16}))
            CHECK(nrm == 0.0);
    }
    SUBCASE("O(1/k) decay for a non-commuting invariant pair") {
        const PolySymbol g = parse_symbol("zb(1)*zb(1)*z(2) + zb(2)*z(1)*z(1)", 2);
        const auto scan = commutator_norm_scan(s1, g, w, {8, 16, 32});
        std::vector<double> lk, ln;
        for (const auto& [k, nrm] : scan) {
            CHECK(nrm > 0.0);
            lk.push_back(std::log(double(k)));
            ln.push_back(std::log(nrm));
        }
        CHECK(fit_line_slope(lk, ln) <= -0.8);
    }
    SUBCASE("non-invariant input rejected") {
        CHECK_THROWS_AS(
            commutator_norm_scan(parse_symbol("z(1)", 2), s1, w, {8}),
            std::invalid_argument);
    }
}

TEST_CASE("commutators quantize the Poisson bracket") {
    // Under the {s_i, theta_i} = +1 bracket normalization the operator
    // identity reads k [T_f, T_g] = T_{-i{f,g}} + O(1/k); the orientation is
    // pinned here empirically (with the opposite sign the difference below
    // would be O(1), not decaying).
    const WeightVector w({1, 2});
    const PolySymbol s1 = PolySymbol::action(2, 0);
    const PolySymbol g = parse_symbol("zb(1)*zb(1)*z(2) + zb(2)*z(1)*z(1)", 2);
    const cplx minus_i(0.0, -1.0);

    SUBCASE("linear action symbol: the identity is exact") {
        const PolySymbol bracket = poisson_bracket_ambient(s1, g) * minus_i;
        for (long long k : {8, 24}) {
            const EigenspaceBasis basis = enumerate_basis(w, k);
            const CMatrix tf = toeplitz_matrix(s1, basis).entries;
            const CMatrix tg = toeplitz_matrix(g, basis).entries;
            CMatrix comm = tf * tg - tg * tf;
            comm *= cplx(double(k));
            const CMatrix tb = toeplitz_matrix(bracket, basis).entries;
            CHECK(spectral_norm(comm - tb) <= 1e-12 * spectral_norm(tb));
        }
    }
    SUBCASE("quadratic action symbol: O(1/k) remainder, sign discriminating") {
        const PolySymbol f2 = s1 * s1;
        const PolySymbol bracket = poisson_bracket_ambient(f2, g) * minus_i;
        std::vector<double> lk, ld;
        double ratio_last = 0.0;
        for (long long k : {8, 16, 32, 64}) {
            const EigenspaceBasis basis = enumerate_basis(w, k);
            const CMatrix tf = toeplitz_matrix(f2, basis).entries;
            const CMatrix tg = toeplitz_matrix(g, basis).entries;
            CMatrix comm = tf * tg - tg * tf;
            comm *= cplx(double(k));
            const CMatrix tb = toeplitz_matrix(bracket, basis).entries;
            const double diff = spectral_norm(comm - tb);
            lk.push_back(std::log(double(k)));
            ld.push_back(std::log(diff));
            ratio_last = diff / spectral_norm(tb);
        }
        CHECK(fit_line_slope(lk, ld) <= -0.8);
        CHECK(ratio_last <= 0.2);
    }
}
