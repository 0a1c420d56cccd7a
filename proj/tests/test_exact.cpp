#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geneq/geneq.hpp"

using namespace geneq;

namespace {

Rational rand_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    return make_rational(Integer(num(rng)), Integer(den(rng)));
}

RatMatrix rand_matrix(std::mt19937_64& rng, std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rand_rational(rng);
    return m;
}

}  // namespace

TEST_CASE("rational canonical form and parsing", "[exact]") {
    REQUIRE(make_rational(2, 4) == make_rational(1, 2));
    REQUIRE(denominator(make_rational(3, -6)) == 2);
    REQUIRE(format_rational(make_rational(-6, 4)) == "-3/2");
    REQUIRE(format_rational(Rational(7)) == "7");
    REQUIRE(format_rational(Rational(0)) == "0");
    REQUIRE(parse_rational("3/4") == make_rational(3, 4));
    REQUIRE(parse_rational("-7") == Rational(-7));
    REQUIRE_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_rational("x"), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        Rational q = rand_rational(rng);
        REQUIRE(parse_rational(format_rational(q)) == q);
    }
}

TEST_CASE("valuations and square roots", "[exact]") {
    REQUIRE(valuation(Integer(12), 2) == 2);
    REQUIRE(valuation(make_rational(-9, 2), 3) == 2);
    REQUIRE(valuation(make_rational(1, 8), 2) == -3);

    Rational root;
    REQUIRE(exact_sqrt(make_rational(9, 4), root));
    REQUIRE(root == make_rational(3, 2));
    REQUIRE_FALSE(exact_sqrt(Rational(2), root));
    REQUIRE_FALSE(exact_sqrt(Rational(-4), root));
    REQUIRE(ceil_sqrt(Rational(16)) == 4);
    REQUIRE(ceil_sqrt(Rational(17)) == 5);
    REQUIRE(ceil_sqrt(make_rational(1, 2)) == 1);
}

TEST_CASE("p-adic absolute value", "[exact]") {
    REQUIRE(padic_abs(Rational(12), 2) == make_rational(1, 4));
    REQUIRE(padic_abs(Rational(0), 7) == 0);
    REQUIRE(padic_abs(make_rational(-9, 2), 3) == make_rational(1, 9));
    REQUIRE(padic_abs(make_rational(-9, 2), 2) == 2);
}

TEST_CASE("p-adic matrix norms and heights", "[exact]") {
    RatMatrix a(2, 2, {Rational(3), make_rational(1, 3), Rational(2), Rational(9)});
    REQUIRE(padic_norm(a, 3) == 3);
    REQUIRE(padic_norm(RatMatrix::identity(2), 5) == 1);
    REQUIRE(padic_norm(RatMatrix(2, 2), 2) == 0);

    REQUIRE(padic_height(RatMatrix(1, 1, {make_rational(1, 3)}), 3) == 3);
    REQUIRE(padic_height(RatMatrix(2, 2), 2) == 1);
    REQUIRE(padic_height(RatMatrix::identity(3), 7) == 1);
}

TEST_CASE("archimedean sup norm", "[exact]") {
    REQUIRE(sup_norm(RatMatrix(1, 2, {Rational(-3), make_rational(1, 2)})) == 3);
    REQUIRE(sup_norm(RatMatrix(2, 2)) == 0);
    REQUIRE(sup_norm(RatMatrix(1, 1, {Rational(1)})) == 1);
}

TEST_CASE("homogeneous and inhomogeneous heights", "[exact]") {
    REQUIRE(homogeneous_height(RatVector{Rational(2), Rational(4)}) == 2);
    REQUIRE(homogeneous_height(RatVector{Rational(1)}) == 1);
    REQUIRE(homogeneous_height(RatVector{make_rational(1, 2), Rational(1)}) == 2);

    REQUIRE(inhomogeneous_height(RatVector{make_rational(1, 2)}) == 2);
    REQUIRE(inhomogeneous_height(RatVector{Rational(0)}) == 1);
    REQUIRE(inhomogeneous_height(RatVector{Rational(3)}) == 3);

    // scaling invariance of the homogeneous height
    std::mt19937_64 rng(12);
    for (int k = 0; k < 100; ++k) {
        RatVector v{rand_rational(rng), rand_rational(rng), rand_rational(rng)};
        if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
        Rational c = rand_rational(rng);
        if (c == 0) continue;
        RatVector cv{c * v[0], c * v[1], c * v[2]};
        REQUIRE(homogeneous_height(cv) == homogeneous_height(v));
    }
}

TEST_CASE("ultrametric norm properties", "[exact]") {
    std::mt19937_64 rng(13);
    const Prime ps[] = {2, 3, 5, 7};
    for (int k = 0; k < 100; ++k) {
        Prime p = ps[k % 4];
        RatMatrix x = rand_matrix(rng, 3), y = rand_matrix(rng, 3);
        Rational nx = padic_norm(x, p), ny = padic_norm(y, p);
        REQUIRE(padic_norm(x + y, p) <= (nx > ny ? nx : ny));
        REQUIRE(padic_norm(x * y, p) <= nx * ny);
        Rational dx = determinant(x);
        REQUIRE(padic_abs(dx, p) <= rational_pow(padic_height(x, p), 3));
        if (dx != 0) {
            REQUIRE(padic_abs(dx, p) <= rational_pow(nx, 3));
            REQUIRE(padic_norm(inverse(x), p) <= rational_pow(nx, 2) / padic_abs(dx, p));
        }
    }
}

TEST_CASE("matrix basics", "[exact]") {
    RatMatrix a(2, 2, {Rational(1), Rational(2), Rational(3), Rational(4)});
    REQUIRE(determinant(a) == -2);
    REQUIRE(a.transpose()(0, 1) == 3);
    REQUIRE(inverse(a) * a == RatMatrix::identity(2));
    REQUIRE_THROWS_AS(inverse(RatMatrix(2, 2)), std::domain_error);

    RatMatrix singular(2, 2, {Rational(1), Rational(2), Rational(2), Rational(4)});
    RatMatrix ker = kernel(singular);
    REQUIRE(ker.cols() == 1);
    REQUIRE(singular * ker == RatMatrix(2, 1));

    REQUIRE(is_symmetric(a) == false);
    REQUIRE(is_skew_symmetric(RatMatrix(2, 2, {Rational(0), Rational(5), Rational(-5), Rational(0)})));
}

TEST_CASE("prime sets", "[exact]") {
    PrimeSet p({5, 2, 3, 3});
    std::vector<Prime> seen(p.begin(), p.end());
    REQUIRE(seen == std::vector<Prime>({2, 3, 5}));
    REQUIRE(p.contains(3));
    REQUIRE_FALSE(p.contains(7));
    REQUIRE_THROWS_AS(PrimeSet({4}), std::invalid_argument);
    REQUIRE_THROWS_AS(PrimeSet({1}), std::invalid_argument);

    std::vector<Prime> f = prime_factors(Integer(360));
    REQUIRE(f == std::vector<Prime>({2, 3, 5}));
}
