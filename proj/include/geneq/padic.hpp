#pragma once

// p-adic absolute values, matrix norms and heights, and the archimedean
// sup-norm, all as exact rationals. The normalization is |p|_p = 1/p.
//
// Height products over "all primes" collapse to a content computation:
// for a nonzero rational vector v, prod_p ||v||_p equals 1/content(v),
// where content(v) is the unique positive rational c with v/c a primitive
// integer vector. Only primes dividing a denominator or all numerators
// contribute, which is exactly that quotient.

#include <stdexcept>

#include "matrix.hpp"
#include "rational.hpp"

namespace geneq {

// |q|_p = p^{-v_p(q)}, |0|_p = 0.
inline Rational padic_abs(const Rational& q, Prime p) {
    if (q == 0) return Rational(0);
    return prime_power_rational(p, -valuation(q, p));
}

inline Rational padic_norm(const RatVector& v, Prime p) {
    Rational m(0);
    for (const Rational& x : v) {
        Rational a = padic_abs(x, p);
        if (a > m) m = a;
    }
    return m;
}

inline Rational padic_norm(const RatMatrix& a, Prime p) {
    Rational m(0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rational x = padic_abs(a(i, j), p);
            if (x > m) m = x;
        }
    return m;
}

// h_p = max(||.||_p, 1).
inline Rational padic_height(const RatVector& v, Prime p) {
    Rational n = padic_norm(v, p);
    return n > 1 ? n : Rational(1);
}

inline Rational padic_height(const RatMatrix& a, Prime p) {
    Rational n = padic_norm(a, p);
    return n > 1 ? n : Rational(1);
}

inline Rational sup_norm(const RatVector& v) {
    Rational m(0);
    for (const Rational& x : v) {
        Rational a = rational_abs(x);
        if (a > m) m = a;
    }
    return m;
}

inline Rational sup_norm(const RatMatrix& a) {
    Rational m(0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rational x = rational_abs(a(i, j));
            if (x > m) m = x;
        }
    return m;
}

// prod_p ||v||_p = lcm(denominators) / gcd(scaled numerators), exact.
inline Rational padic_norm_product(const RatVector& v) {
    Integer l(1), g(0);
    for (const Rational& x : v) l = integer_lcm(l, denominator(x));
    for (const Rational& x : v)
        if (x != 0) g = integer_gcd(g, Integer(numerator(x) * (l / denominator(x))));
    if (g == 0) throw std::invalid_argument("padic_norm_product: zero vector");
    return make_rational(l, g);
}

// Homogeneous height H(v) = ||v|| * prod_p ||v||_p, v != 0.
inline Rational homogeneous_height(const RatVector& v) {
    return sup_norm(v) * padic_norm_product(v);
}

inline Rational homogeneous_height(const RatMatrix& a) {
    RatVector flat;
    flat.reserve(a.rows() * a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) flat.push_back(a(i, j));
    return homogeneous_height(flat);
}

// Inhomogeneous height h(v) = H((1, v)).
inline Rational inhomogeneous_height(const RatVector& v) {
    RatVector w;
    w.reserve(v.size() + 1);
    w.push_back(Rational(1));
    for (const Rational& x : v) w.push_back(x);
    return homogeneous_height(w);
}

}  // namespace geneq
