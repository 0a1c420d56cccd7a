#pragma once

// Prime sets for denominator avoidance, plus the small factorization
// utility genus checking needs (trial division then Pollard rho; the
// integers involved are determinants of desk-scale forms).

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace geneq {

inline bool is_prime(const Integer& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline bool is_prime(Prime p) { return is_prime(Integer(p)); }

// Finite set of distinct primes, kept sorted. Every element is checked.
class PrimeSet {
public:
    PrimeSet() = default;

    explicit PrimeSet(const std::vector<Prime>& primes) {
        std::set<Prime> seen;
        for (Prime p : primes) {
            if (!is_prime(p))
                throw std::invalid_argument("PrimeSet: " + std::to_string(p) + " is not prime");
            seen.insert(p);
        }
        primes_.assign(seen.begin(), seen.end());
    }

    bool contains(Prime p) const {
        return std::binary_search(primes_.begin(), primes_.end(), p);
    }

    std::size_t size() const { return primes_.size(); }
    bool empty() const { return primes_.empty(); }

    std::vector<Prime>::const_iterator begin() const { return primes_.begin(); }
    std::vector<Prime>::const_iterator end() const { return primes_.end(); }

    friend bool operator==(const PrimeSet& a, const PrimeSet& b) {
        return a.primes_ == b.primes_;
    }

private:
    std::vector<Prime> primes_;
};

namespace detail {

inline Integer pollard_rho(const Integer& n) {
    // Brent's cycle variant; n must be odd, composite, > 1.
    for (unsigned long c = 1;; ++c) {
        Integer x(2), y(2), d(1), diff;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            diff = x > y ? x - y : y - x;
            if (diff == 0) break;  // cycle without factor; retry with next c
            d = integer_gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_into(Integer n, std::set<Integer>& out) {
    if (n <= 1) return;
    if (is_prime(n)) { out.insert(n); return; }
    for (Prime p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.insert(Integer(p));
            Integer rest;
            mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t());
            factor_into(rest, out);
            return;
        }
    }
    for (Prime p = 17; p < 100000; p += 2) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.insert(Integer(p));
            Integer rest;
            mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t());
            factor_into(rest, out);
            return;
        }
        if (Integer(p) * p > n) break;
    }
    if (is_prime(n)) { out.insert(n); return; }
    Integer d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

// Distinct prime factors of n (sign ignored; 0 rejected).
inline std::vector<Prime> prime_factors(const Integer& n) {
    if (n == 0) throw std::invalid_argument("prime_factors: zero argument");
    std::set<Integer> fs;
    detail::factor_into(abs(n), fs);
    std::vector<Prime> out;
    for (const Integer& f : fs) {
        if (!f.fits_ulong_p())
            throw std::domain_error("prime_factors: factor exceeds machine range");
        out.push_back(f.get_ui());
    }
    return out;
}

}  // namespace geneq
