#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geneq/geneq.hpp"

using namespace geneq;

namespace {

RatMatrix rand_invertible(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 3);
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = make_rational(Integer(num(rng)), Integer(den(rng)));
        if (determinant(m) != 0) return m;
    }
}

RatMatrix rand_regular_symmetric(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(-9, 9);
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = Rational(num(rng));
        if (determinant(m) != 0) return m;
    }
}

}  // namespace

TEST_CASE("sign matrix selection", "[padiclin]") {
    SignMatrix e1 = choose_sign_matrix(RatMatrix::identity(2), 3);
    REQUIRE(e1.diag == std::vector<int>({-1, -1}));

    SignMatrix e2 = choose_sign_matrix(RatMatrix(1, 1, {Rational(3)}), 3);
    REQUIRE(e2.diag == std::vector<int>({1}));

    SignMatrix e3 = choose_sign_matrix(RatMatrix::identity(2), 5);
    REQUIRE(e3.diag == std::vector<int>({-1, -1}));

    REQUIRE_THROWS_AS(choose_sign_matrix(RatMatrix(2, 2), 3), std::invalid_argument);

    // postcondition on random invertible inputs
    std::mt19937_64 rng(31);
    const Prime ps[] = {2, 3, 5, 7, 11};
    for (int k = 0; k < 60; ++k) {
        std::size_t n = 1 + k % 4;
        Prime p = ps[k % 5];
        RatMatrix a = rand_invertible(rng, n);
        SignMatrix e = choose_sign_matrix(a, p);
        Rational lhs = padic_abs(determinant(a - e.to_matrix()), p);
        Rational rhs = padic_abs(Rational(prime_power(2, static_cast<unsigned long>(n))) *
                                     determinant(a),
                                 p);
        REQUIRE(lhs >= rhs);
    }
}

TEST_CASE("determinant stability guard", "[padiclin]") {
    RatMatrix i2 = RatMatrix::identity(2);
    REQUIRE(det_stable(i2, RatMatrix(2, 2, {Rational(5), Rational(0), Rational(0), Rational(1)}),
                       2));
    REQUIRE(det_stable(i2, i2, 7));
    RatMatrix x(2, 2, {Rational(2), Rational(0), Rational(0), Rational(1)});
    RatMatrix y(2, 2, {Rational(3), Rational(0), Rational(0), Rational(1)});
    REQUIRE_FALSE(det_stable(x, y, 2));
    REQUIRE_THROWS_AS(det_stable(RatMatrix(2, 2), i2, 2), std::invalid_argument);
}

TEST_CASE("diagonalization over Z_p", "[padiclin]") {
    // already diagonal: identity transform
    PadicDiagonalization d1 =
        padic_diagonalize(RatMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(2)}),
                          3, 8);
    REQUIRE(d1.transform.agrees_with(PadicMatrix::identity(3, 2, d1.transform.precision()),
                                     d1.transform.precision()));

    // worked example, reproduced bit for bit
    PadicDiagonalization d2 =
        padic_diagonalize(RatMatrix(2, 2, {Rational(1), Rational(1), Rational(1), Rational(2)}),
                          5, 8);
    RatMatrix shear(2, 2, {Rational(1), Rational(-1), Rational(0), Rational(1)});
    REQUIRE(d2.transform.agrees_with(
        PadicMatrix::from_rational(shear, 5, d2.transform.precision()),
        d2.transform.precision()));

    REQUIRE_THROWS_AS(padic_diagonalize(RatMatrix::identity(2), 2, 8), std::invalid_argument);

    // postconditions on random regular symmetric forms at odd primes
    std::mt19937_64 rng(32);
    const Prime ps[] = {3, 5, 7};
    for (int k = 0; k < 30; ++k) {
        Prime p = ps[k % 3];
        std::size_t n = 2 + k % 2;
        RatMatrix f = rand_regular_symmetric(rng, n);
        // budget the target so 8 digits survive the reported guard loss
        long target = 10 + 2 * valuation(determinant(f), p);
        PadicDiagonalization d = padic_diagonalize(f, p, target);
        REQUIRE(d.transform.det_valuation() == 0);
        PadicMatrix fp = PadicMatrix::from_rational(f, p, d.transform.precision());
        PadicMatrix diag = d.transform.transpose() * fp * d.transform;
        long usable = target - d.guard_loss;
        REQUIRE(usable >= 8);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                Rational off = diag.entry_rational(i, j);
                if (off != 0) REQUIRE(valuation(off, p) >= usable);
            }
    }
}

TEST_CASE("one Newton step", "[padiclin]") {
    RatMatrix i2 = RatMatrix::identity(2);

    // fixed point: exact solution is returned unchanged
    PadicMatrix exact = PadicMatrix::from_rational(i2, 3, 10);
    PadicMatrix studied = hensel_step(i2, i2, exact);
    REQUIRE(studied.agrees_with(exact, 8));

    // residual valuation 1 at p = 3 doubles
    RatMatrix x3(2, 2, {Rational(4), Rational(0), Rational(0), Rational(1)});
    PadicMatrix y3 = hensel_step(i2, i2, PadicMatrix::from_rational(x3, 3, 20));
    RatMatrix yr3 = y3.to_rational_matrix();
    REQUIRE(valuation(yr3(0, 0) - make_rational(17, 8), 3) >= 15);
    Rational res3 = (yr3.transpose() * yr3 - i2)(0, 0);
    REQUIRE(valuation(res3, 3) == 2);

    // p = 2 pays one digit to the division by 2
    RatMatrix x2(2, 2, {Rational(5), Rational(0), Rational(0), Rational(1)});
    PadicMatrix y2 = hensel_step(i2, i2, PadicMatrix::from_rational(x2, 2, 20));
    RatMatrix yr2 = y2.to_rational_matrix();
    REQUIRE(valuation(yr2(0, 0) - make_rational(13, 5), 2) >= 14);
    Rational res2 = (yr2.transpose() * yr2 - i2)(0, 0);
    REQUIRE(valuation(res2, 2) == 4);
}

TEST_CASE("local equivalence at one prime", "[padiclin]") {
    RatMatrix i2 = RatMatrix::identity(2);

    // F = G: the identity seed wins deterministically
    LocalEquivalence id = local_equiv(i2, i2, 2, 10);
    REQUIRE(id.sigma_p.agrees_with(PadicMatrix::identity(2, 2, id.sigma_p.precision()),
                                   id.sigma_p.precision()));

    // worked pair at p = 3: lands on the exact integral solution
    RatMatrix g(2, 2, {Rational(2), Rational(1), Rational(1), Rational(1)});
    LocalEquivalence s3 = local_equiv(i2, g, 3, 10);
    RatMatrix shear(2, 2, {Rational(1), Rational(0), Rational(1), Rational(1)});
    REQUIRE(s3.sigma_p.agrees_with(
        PadicMatrix::from_rational(shear, 3, s3.sigma_p.precision()), s3.sigma_p.precision()));
    REQUIRE(s3.sigma_p.det_valuation() == 0);

    // certified refusals: determinant-valuation gap, then seed exhaustion
    // (det ratio 2 is a unit but not a square mod 3)
    RatMatrix g13(2, 2, {Rational(1), Rational(0), Rational(0), Rational(3)});
    REQUIRE_THROWS_MATCHES(local_equiv(i2, g13, 3, 8), NotLocallyEquivalentError,
                           Catch::Matchers::Predicate<NotLocallyEquivalentError>(
                               [](const NotLocallyEquivalentError& e) { return e.prime == 3; }));
    RatMatrix g12(2, 2, {Rational(1), Rational(0), Rational(0), Rational(2)});
    REQUIRE_THROWS_AS(local_equiv(i2, g12, 3, 8), NotLocallyEquivalentError);

    // p-denominators are cleared jointly: scaled pair behaves like the original
    RatMatrix fs = make_rational(1, 3) * i2;
    RatMatrix gs = make_rational(1, 3) * g;
    LocalEquivalence scaled = local_equiv(fs, gs, 3, 10);
    PadicMatrix fp = PadicMatrix::from_rational(fs, 3, scaled.sigma_p.precision());
    PadicMatrix gp = PadicMatrix::from_rational(gs, 3, scaled.sigma_p.precision());
    PadicMatrix res = scaled.sigma_p.transpose() * fp * scaled.sigma_p - gp;
    std::optional<long> rv = res.min_valuation();
    REQUIRE((!rv || *rv >= 10 - scaled.guard_loss - res.shift()));

    // Hensel stability: doubling the precision refines, never contradicts
    LocalEquivalence lo = local_equiv(i2, g, 5, 8);
    LocalEquivalence hi = local_equiv(i2, g, 5, 16);
    REQUIRE(lo.sigma_p.agrees_with(hi.sigma_p, 8 - lo.guard_loss));
}

TEST_CASE("local equivalence postcondition on random congruent pairs", "[padiclin]") {
    std::mt19937_64 rng(33);
    const Prime ps[] = {2, 3, 5};
    std::uniform_int_distribution<long> small(-2, 2);
    int done = 0;
    while (done < 20) {
        Prime p = ps[done % 3];
        RatMatrix f = rand_regular_symmetric(rng, 2);
        // unimodular-at-p change of basis with small entries
        RatMatrix t(2, 2, {Rational(1), Rational(small(rng)), Rational(0), Rational(1)});
        t(1, 0) = Rational(small(rng)) * Rational(static_cast<long>(p));
        RatMatrix g = t.transpose() * f * t;
        LocalEquivalence le = local_equiv(f, g, p, 10);
        REQUIRE(le.sigma_p.det_valuation() == 0);
        PadicMatrix fp = PadicMatrix::from_rational(f, p, le.sigma_p.precision());
        PadicMatrix gp = PadicMatrix::from_rational(g, p, le.sigma_p.precision());
        PadicMatrix res = le.sigma_p.transpose() * fp * le.sigma_p - gp;
        std::optional<long> rv = res.min_valuation();
        REQUIRE((!rv || *rv >= 10 - le.guard_loss - res.shift()));
        ++done;
    }
}
