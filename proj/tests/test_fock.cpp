#include <doctest.h>

#include <cmath>

#include "oscred/fock.hpp"

using namespace oscred;

TEST_CASE("weight vector invariants") {
    CHECK_THROWS(WeightVector({}));
    CHECK_THROWS(WeightVector({0, 1}));
    CHECK_THROWS(WeightVector({2, 4}));  // not coprime
    const WeightVector w({2, 4, 3});
    CHECK(w.n() == 3);
    CHECK(w.lcm() == 12);
}

TEST_CASE("basis enumeration") {
    SUBCASE("unweighted compositions") {
        const auto b = enumerate_basis(WeightVector({1, 1}), 2);
        REQUIRE(b.dim() == 3);
        // graded lex: equal total degree, lex ascending
        CHECK(b.indices[0] == MultiIndex{0, 2});
        CHECK(b.indices[1] == MultiIndex{1, 1});
        CHECK(b.indices[2] == MultiIndex{2, 0});
    }
    SUBCASE("weighted solutions") {
        const auto b = enumerate_basis(WeightVector({2, 3}), 6);
        REQUIRE(b.dim() == 2);
        CHECK(b.find(MultiIndex{3, 0}) != EigenspaceBasis::npos);
        CHECK(b.find(MultiIndex{0, 2}) != EigenspaceBasis::npos);
        CHECK(b.indices[0] == MultiIndex{0, 2});  // |alpha| = 2 before 3
    }
    SUBCASE("empty eigenspace") {
        CHECK(enumerate_basis(WeightVector({2, 4, 3}), 1).dim() == 0);
    }
    SUBCASE("k = 0 is the constants") {
        CHECK(enumerate_basis(WeightVector({1, 2}), 0).dim() == 1);
    }
}

TEST_CASE("dimension counting") {
    CHECK(count_dim(WeightVector({1, 1, 1}), 5) == 21);
    CHECK(count_dim(WeightVector({1, 2}), 7) == 4);
    CHECK(count_dim(WeightVector({2, 2, 3}), 12) == 12);
    CHECK(count_dim(WeightVector({1, 1}), 5) == 6);

    SUBCASE("agrees with enumeration for k <= 60") {
        for (const auto& pv : {std::vector<long long>{1, 2}, {2, 3}, {2, 4, 3}, {1, 1, 1}}) {
            const WeightVector w(pv);
            for (long long k = 0; k <= 60; ++k)
                CHECK(count_dim(w, k) == enumerate_basis(w, k).dim());
        }
    }
    SUBCASE("periodic monotonicity N(k + lcm) >= N(k)") {
        for (const auto& pv : {std::vector<long long>{1, 2}, {2, 3}, {2, 4, 3}}) {
            const WeightVector w(pv);
            const long long period = w.lcm();
            for (long long k = 0; k <= 60; ++k)
                CHECK(count_dim(w, k + period) >= count_dim(w, k));
        }
    }
}

TEST_CASE("Bargmann norms") {
    const double tau = 2.0 * M_PI;
    CHECK(bargmann_norm_sq({0}, WeightVector({1}), 1) == doctest::Approx(tau).epsilon(1e-14));
    CHECK(bargmann_norm_sq({1}, WeightVector({1}), 1) == doctest::Approx(tau).epsilon(1e-14));
    CHECK(bargmann_norm_sq({2, 0}, WeightVector({1, 1}), 2) ==
          doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));

    SUBCASE("strict positivity and permutation equivariance") {
        const WeightVector w({2, 3});
        const WeightVector wp({3, 2});
        for (long long a = 0; a <= 6; ++a)
            for (long long b = 0; b <= 6; ++b) {
                const double v = bargmann_norm_sq({a, b}, w, 7);
                CHECK(v > 0.0);
                CHECK(v == doctest::Approx(bargmann_norm_sq({b, a}, wp, 7)).epsilon(1e-14));
            }
    }
    SUBCASE("scaling law: norm * k^(|alpha|+n) independent of k") {
        const MultiIndex alpha{3, 1};
        const WeightVector w({1, 2});
        const double n1 = bargmann_norm_sq(alpha, w, 5) * std::pow(5.0, 4.0 + 2.0);
        const double n2 = bargmann_norm_sq(alpha, w, 11) * std::pow(11.0, 4.0 + 2.0);
        CHECK(n1 == doctest::Approx(n2).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS(bargmann_norm_sq({1, 2, 3}, WeightVector({1, 2}), 4));
    }
}

TEST_CASE("oscillator eigenvalues") {
    CHECK(oscillator_eigenvalue({7, 0, 0}, WeightVector({1, 1, 1}), 7) == 1.0);
    CHECK(oscillator_eigenvalue({1, 1}, WeightVector({2, 3}), 1) == 5.0);
    CHECK(oscillator_eigenvalue({0, 0}, WeightVector({1, 2}), 3) == 0.0);
    SUBCASE("equals one on every basis element") {
        const WeightVector w({2, 4, 3});
        const auto b = enumerate_basis(w, 24);
        for (const auto& alpha : b.indices)
            CHECK(oscillator_eigenvalue(alpha, w, 24) == 1.0);
    }
}
