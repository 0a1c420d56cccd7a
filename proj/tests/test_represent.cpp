#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geneq/geneq.hpp"

using namespace geneq;

namespace {

QuadraticForm rand_form(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(-4, 4);
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = Rational(num(rng));
        if (determinant(m) != 0) return QuadraticForm(m);
    }
}

}  // namespace

TEST_CASE("representation search", "[represent]") {
    QuadraticForm i2(RatMatrix::identity(2));

    RepresentResult r5 = represent(i2, Rational(5), Rational(10));
    REQUIRE(r5.status == SearchStatus::Found);
    REQUIRE(r5.vec == RatVector({Rational(1), Rational(2)}));

    QuadraticForm one(RatMatrix(1, 1, {Rational(1)}));
    RepresentResult r4 = represent(one, Rational(4), Rational(10));
    REQUIRE(r4.status == SearchStatus::Found);
    REQUIRE(r4.vec == RatVector({Rational(2)}));

    // certified bound for b = 3, then the certified exhaust
    REQUIRE(masser_height_cap(i2, Rational(3)) == 216);
    RepresentResult r3 = represent(i2, Rational(3), Rational(216));
    REQUIRE(r3.status == SearchStatus::CertifiedNone);

    // same search below the bound only reports inconclusive
    RepresentResult r3low = represent(i2, Rational(3), Rational(20));
    REQUIRE(r3low.status == SearchStatus::Inconclusive);

    REQUIRE_THROWS_AS(represent(i2, Rational(0), Rational(10)), std::invalid_argument);

    // one-dimensional forms are decided algebraically
    QuadraticForm three(RatMatrix(1, 1, {Rational(3)}));
    RepresentResult r13 = represent(three, make_rational(1, 3), Rational(10));
    REQUIRE(r13.status == SearchStatus::Found);
    REQUIRE(r13.vec == RatVector({make_rational(1, 3)}));
    RepresentResult rn = represent(three, Rational(2), Rational(1000));
    REQUIRE(rn.status == SearchStatus::CertifiedNone);
}

TEST_CASE("found representations are exact and within the cutoff", "[represent]") {
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<long> coord(-6, 6);
    int done = 0;
    while (done < 40) {
        std::size_t n = 2 + done % 2;
        QuadraticForm f = rand_form(rng, n);
        RatVector t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = Rational(coord(rng));
        Rational b = f(t);
        if (b == 0) continue;
        Rational cutoff = inhomogeneous_height(t);
        RepresentResult r = represent(f, b, cutoff);
        REQUIRE(r.status == SearchStatus::Found);
        REQUIRE(f(r.vec) == b);
        REQUIRE(inhomogeneous_height(r.vec) <= cutoff);
        ++done;
    }
}

TEST_CASE("rational equivalence search", "[represent]") {
    QuadraticForm i2(RatMatrix::identity(2));

    EquivSearchResult self = rational_equiv_search(i2, i2);
    REQUIRE(self.status == SearchStatus::Found);
    REQUIRE(self.sigma.transpose() * self.sigma == RatMatrix::identity(2));

    QuadraticForm g22(RatMatrix(2, 2, {Rational(2), Rational(0), Rational(0), Rational(2)}));
    EquivSearchResult e1 = rational_equiv_search(i2, g22);
    REQUIRE(e1.status == SearchStatus::Found);
    REQUIRE(e1.sigma == RatMatrix(2, 2, {Rational(1), Rational(-1), Rational(1), Rational(1)}));

    QuadraticForm g(RatMatrix(2, 2, {Rational(2), Rational(1), Rational(1), Rational(1)}));
    EquivSearchResult e2 = rational_equiv_search(i2, g);
    REQUIRE(e2.status == SearchStatus::Found);
    REQUIRE(e2.sigma == RatMatrix(2, 2, {Rational(1), Rational(0), Rational(1), Rational(1)}));

    // 3 is not a sum of two rational squares: certified with the full bound
    QuadraticForm g13(RatMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(3)}));
    EquivSearchResult none =
        rational_equiv_search(i2, g13, EquivSearchOptions{Rational(300), true});
    REQUIRE(none.status == SearchStatus::CertifiedNone);

    // signature mismatch is certified without any search
    EquivSearchResult sig = rational_equiv_search(i2, QuadraticForm(-RatMatrix::identity(2)));
    REQUIRE(sig.status == SearchStatus::CertifiedNone);

    // the last step of the column search is one-dimensional and algebraic,
    // so this pair is certified even under a low cutoff
    EquivSearchResult low13 =
        rational_equiv_search(i2, g13, EquivSearchOptions{Rational(20), false});
    REQUIRE(low13.status == SearchStatus::CertifiedNone);

    // a cutoff below every representing vector stays honest
    QuadraticForm g25(RatMatrix(2, 2, {Rational(25), Rational(0), Rational(0), Rational(25)}));
    REQUIRE(rational_equiv_search(i2, g25).status == SearchStatus::Found);
    EquivSearchResult inc =
        rational_equiv_search(i2, g25, EquivSearchOptions{Rational(3), false});
    REQUIRE(inc.status == SearchStatus::Inconclusive);
}

TEST_CASE("equivalence search on random congruent pairs", "[represent]") {
    std::mt19937_64 rng(52);
    std::uniform_int_distribution<long> entry(-2, 2);
    int done = 0;
    for (int attempt = 0; attempt < 300 && done < 15; ++attempt) {
        std::size_t n = 2;
        QuadraticForm f = rand_form(rng, n);
        RatMatrix t(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) t(i, j) = Rational(entry(rng));
        if (determinant(t) == 0) continue;
        RatMatrix gm = t.transpose() * f.gram() * t;
        EquivSearchResult r = rational_equiv_search(f, QuadraticForm(gm),
                                                    EquivSearchOptions{Rational(60), false});
        if (r.status != SearchStatus::Found) continue;  // practical cutoff may give up
        REQUIRE(r.sigma.transpose() * f.gram() * r.sigma == gm);
        ++done;
    }
    REQUIRE(done == 15);
}

TEST_CASE("columns built for a diagonal target are orthogonal", "[represent]") {
    QuadraticForm f(RatMatrix(2, 2, {Rational(1), Rational(1), Rational(1), Rational(3)}));
    QuadraticForm g(RatMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(2)}));
    EquivSearchResult r = rational_equiv_search(f, g);
    REQUIRE(r.status == SearchStatus::Found);
    RatMatrix check = r.sigma.transpose() * f.gram() * r.sigma;
    REQUIRE(check == g.gram());
    // with a diagonal target the returned columns themselves are F-orthogonal
    REQUIRE(check(0, 1) == 0);
}

TEST_CASE("genus decision", "[represent]") {
    QuadraticForm i2(RatMatrix::identity(2));
    QuadraticForm g(RatMatrix(2, 2, {Rational(2), Rational(1), Rational(1), Rational(1)}));
    QuadraticForm g13(RatMatrix(2, 2, {Rational(1), Rational(0), Rational(0), Rational(3)}));

    REQUIRE(same_genus(i2, g).same);

    GenusReport r13 = same_genus(i2, g13);
    REQUIRE_FALSE(r13.same);
    bool failed_at_3 = false;
    for (const PlaceReport& place : r13.places)
        if (!place.ok && !place.archimedean && place.p == 3) failed_at_3 = true;
    REQUIRE(failed_at_3);

    GenusReport rsig = same_genus(i2, QuadraticForm(-RatMatrix::identity(2)));
    REQUIRE_FALSE(rsig.same);
    REQUIRE_FALSE(rsig.places.front().ok);  // the real place comes first

    // reflexive and symmetric on random forms
    std::mt19937_64 rng(53);
    for (int k = 0; k < 10; ++k) {
        QuadraticForm f = rand_form(rng, 2);
        QuadraticForm h = rand_form(rng, 2);
        REQUIRE(same_genus(f, f).same);
        REQUIRE(same_genus(f, h).same == same_genus(h, f).same);
    }
}
