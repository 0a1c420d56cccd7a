#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geneq/geneq.hpp"

using namespace geneq;

namespace {

QuadraticForm rand_form(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(-9, 9);
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = Rational(num(rng));
        if (determinant(m) != 0) return QuadraticForm(m);
    }
}

RatMatrix rand_invertible(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(-5, 5);
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(num(rng));
        if (determinant(m) != 0) return m;
    }
}

}  // namespace

TEST_CASE("form validation", "[quadform]") {
    REQUIRE_THROWS_AS(QuadraticForm(RatMatrix(2, 2, {Rational(1), Rational(2), Rational(3),
                                                     Rational(4)})),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(QuadraticForm(RatMatrix(2, 2, {Rational(1), Rational(2), Rational(2),
                                                     Rational(4)})),
                      std::invalid_argument);
    QuadraticForm f(RatMatrix::identity(2));
    REQUIRE(f.dim() == 2);
    REQUIRE(f.det() == 1);
    REQUIRE(f(RatVector{Rational(3), Rational(4)}) == 25);
}

TEST_CASE("orthogonal diagonalization", "[quadform]") {
    // already diagonal
    QuadraticForm d12(RatMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(2)}));
    REQUIRE(orthogonal_diagonalize(d12) == RatMatrix::identity(2));

    // diagonal pivot with one elimination
    QuadraticForm f2(RatMatrix(2, 2, {Rational(1), Rational(1), Rational(1), Rational(2)}));
    RatMatrix s2 = orthogonal_diagonalize(f2);
    REQUIRE(s2 == RatMatrix(2, 2, {Rational(1), Rational(-1), Rational(0), Rational(1)}));
    REQUIRE(s2.transpose() * f2.gram() * s2 == RatMatrix::identity(2));

    // isotropic diagonal forces the e_i + e_j pivot
    QuadraticForm anti(RatMatrix(2, 2, {Rational(0), Rational(1), Rational(1), Rational(0)}));
    RatMatrix sa = orthogonal_diagonalize(anti);
    REQUIRE(sa(0, 0) == 1);
    REQUIRE(sa(1, 0) == 1);
    RatMatrix da = sa.transpose() * anti.gram() * sa;
    REQUIRE(da == RatMatrix(2, 2, {Rational(2), Rational(0), Rational(0), Rational(-2)}));

    // deterministic: identical calls give identical matrices
    REQUIRE(orthogonal_diagonalize(anti) == sa);

    // random regular forms: diagonal, regular, invertible transform
    std::mt19937_64 rng(41);
    for (int k = 0; k < 50; ++k) {
        std::size_t n = 2 + k % 4;
        QuadraticForm f = rand_form(rng, n);
        RatMatrix s = orthogonal_diagonalize(f);
        REQUIRE(determinant(s) != 0);
        RatMatrix d = s.transpose() * f.gram() * s;
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(d(i, i) != 0);
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) REQUIRE(d(i, j) == 0);
        }
    }
}

TEST_CASE("signature", "[quadform]") {
    RatMatrix m(3, 3);
    m(0, 0) = 1; m(1, 1) = -2; m(2, 2) = 3;
    REQUIRE(signature(QuadraticForm(m)) == std::pair<std::size_t, std::size_t>(2, 1));

    QuadraticForm anti(RatMatrix(2, 2, {Rational(0), Rational(1), Rational(1), Rational(0)}));
    REQUIRE(signature(anti) == std::pair<std::size_t, std::size_t>(1, 1));

    REQUIRE(signature(QuadraticForm(-RatMatrix::identity(3))) ==
            std::pair<std::size_t, std::size_t>(0, 3));

    // congruence invariance
    std::mt19937_64 rng(42);
    for (int k = 0; k < 40; ++k) {
        std::size_t n = 2 + k % 3;
        QuadraticForm f = rand_form(rng, n);
        RatMatrix s = rand_invertible(rng, n);
        REQUIRE(signature(QuadraticForm(s.transpose() * f.gram() * s)) == signature(f));
    }
}
