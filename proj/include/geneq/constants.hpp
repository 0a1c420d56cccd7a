#pragma once

// The per-prime avoidance constants controlling the approximation step:
// kappa bounds the p-adic height of every candidate tau, alpha bounds the
// norm of the local skew data, beta lower-bounds the determinant to be
// protected, eps is the closeness the CRT step must deliver, and d, C
// bound the denominator and numerators of the assembled skew matrix.

#include <map>
#include <stdexcept>

#include "matrix.hpp"
#include "padic.hpp"
#include "padiclin.hpp"
#include "primes.hpp"
#include "quadform.hpp"

namespace geneq {

struct PrimeAvoidance {
    Rational kappa;  // power of p, >= 1
    Integer alpha;   // power of p, >= 1
    Rational beta;   // power of p, possibly < 1
    long ell;        // digits the CRT approximation carries at p
};

struct AvoidanceConstants {
    std::map<Prime, PrimeAvoidance> per_prime;
    Rational eps;  // in (0, 1]
    Integer d;     // product of the alphas
    Integer C;     // product of the p^ell
};

// Least l >= 1 with p^{l-1} >= bound, by exact comparison.
inline long crt_digit_count(Prime p, const Rational& bound) {
    long ell = 1;
    Rational power(1);
    while (power < bound) {
        power *= static_cast<unsigned long>(p);
        ++ell;
    }
    return ell;
}

inline AvoidanceConstants compute_constants(const QuadraticForm& f, const RatMatrix& sigma,
                                            const RatMatrix& big_sigma, const PrimeSet& primes) {
    if (primes.empty()) throw std::invalid_argument("compute_constants: empty prime set");
    const std::size_t n = f.dim();
    const unsigned long nu = static_cast<unsigned long>(n);
    Rational det_sigma = determinant(sigma);
    if (det_sigma == 0) throw std::invalid_argument("compute_constants: sigma singular");
    RatMatrix sinv = inverse(big_sigma);
    const Rational two_n(prime_power(2, nu));

    AvoidanceConstants c;
    c.d = 1;
    for (Prime p : primes) {
        PrimeAvoidance pa;
        pa.kappa = Rational(1);
        for (std::size_t idx = 0; idx < (std::size_t(1) << n); ++idx) {
            SignMatrix e = SignMatrix::from_index(n, idx);
            Rational h = padic_height(big_sigma * e.to_matrix() * sinv * sigma, p);
            if (h > pa.kappa) pa.kappa = h;
        }
        Rational inv_two_n = Rational(1) / padic_abs(two_n, p);
        Rational inv_det = Rational(1) / padic_abs(det_sigma, p);
        Rational alpha_rat = padic_norm(f.gram(), p) * rational_pow(pa.kappa, nu) *
                             (inv_two_n > inv_det ? inv_two_n : inv_det);
        if (alpha_rat < 1) alpha_rat = 1;
        if (denominator(alpha_rat) != 1)
            throw std::logic_error("compute_constants: alpha not integral");
        pa.alpha = numerator(alpha_rat);
        pa.beta = padic_abs(two_n * f.det() * det_sigma, p) / rational_pow(pa.kappa, nu);
        c.per_prime.emplace(p, pa);
        c.d *= pa.alpha;
    }

    bool first = true;
    for (const auto& [p, pa] : c.per_prime) {
        Rational cand = pa.beta / (pa.kappa * rational_pow(Rational(pa.alpha), nu));
        if (first || cand < c.eps) c.eps = cand;
        first = false;
    }
    if (c.eps <= 0 || c.eps > 1) throw std::logic_error("compute_constants: eps out of range");

    c.C = 1;
    Rational bound = Rational(c.d) / c.eps;
    for (auto& [p, pa] : c.per_prime) {
        pa.ell = crt_digit_count(p, bound);
        c.C *= prime_power(p, static_cast<unsigned long>(pa.ell));
    }
    return c;
}

}  // namespace geneq
