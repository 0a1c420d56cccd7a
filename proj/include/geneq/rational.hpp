#pragma once

// Exact scalar arithmetic: arbitrary-precision integers and rationals
// (GMP-backed), p-adic valuations, and small number-theoretic helpers.
// Every quantity in this library is exact; nothing here rounds.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace geneq {

using Integer  = mpz_class;
using Rational = mpq_class;
using Prime    = unsigned long;

// Canonical rational: gcd(num, den) = 1, den > 0. GMP keeps arithmetic
// results canonical; only raw construction needs an explicit step.
inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline const Integer& numerator(const Rational& q) { return q.get_num(); }
inline const Integer& denominator(const Rational& q) { return q.get_den(); }

inline Integer pow_integer(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Integer prime_power(Prime p, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

inline Rational rational_pow(const Rational& q, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), e);
    return r;
}

// p^e for any sign of e, as an exact rational.
inline Rational prime_power_rational(Prime p, long e) {
    if (e >= 0) return Rational(prime_power(p, static_cast<unsigned long>(e)));
    return make_rational(1, prime_power(p, static_cast<unsigned long>(-e)));
}

// v_p(n) for n != 0.
inline long valuation(const Integer& n, Prime p) {
    if (n == 0) throw std::invalid_argument("valuation: zero argument");
    Integer rest;
    const Integer pz(p);
    return static_cast<long>(
        mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

// v_p(q) = v_p(num) - v_p(den) for q != 0.
inline long valuation(const Rational& q, Prime p) {
    if (q == 0) throw std::invalid_argument("valuation: zero argument");
    if (mpz_divisible_ui_p(numerator(q).get_mpz_t(), p))
        return valuation(numerator(q), p);
    if (mpz_divisible_ui_p(denominator(q).get_mpz_t(), p))
        return -valuation(denominator(q), p);
    return 0;
}

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Integer integer_gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer integer_lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Exact square root of a nonnegative rational, if it is one.
inline bool exact_sqrt(const Rational& q, Rational& root) {
    if (q < 0) return false;
    if (!mpz_perfect_square_p(numerator(q).get_mpz_t()) ||
        !mpz_perfect_square_p(denominator(q).get_mpz_t()))
        return false;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), numerator(q).get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), denominator(q).get_mpz_t());
    root = make_rational(rn, rd);
    return true;
}

// Smallest integer m with m >= sqrt(q), for q >= 0 rational.
inline Integer ceil_sqrt(const Rational& q) {
    if (q < 0) throw std::invalid_argument("ceil_sqrt: negative argument");
    if (q == 0) return 0;
    // ceil(num/den) first, then integer sqrt side: m >= sqrt(q) iff m*m >= q.
    Integer lo = 0, hi = 1;
    while (Rational(hi) * hi < q) hi *= 2;
    while (lo + 1 < hi) {
        Integer mid = (lo + hi) / 2;
        if (Rational(mid) * mid >= q) hi = mid; else lo = mid;
    }
    return hi;
}

inline std::string format_rational(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).get_str();
    return numerator(q).get_str() + "/" + denominator(q).get_str();
}

// Accepts "n" or "n/d"; whitespace is not tolerated.
inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("parse_rational: bad literal '" + s + "'");
    if (denominator(q) == 0) throw std::invalid_argument("parse_rational: zero denominator");
    q.canonicalize();
    return q;
}

}  // namespace geneq
