#pragma once

// Genus membership test: equivalence over the reals (signature) and over
// Z_p at every prime that could carry an obstruction. Away from 2, the
// determinants, and the entry denominators, both forms are unimodular and
// their p-adic equivalence is automatic, so checking the finite set below
// decides the genus.

#include <string>
#include <vector>

#include "errors.hpp"
#include "padiclin.hpp"
#include "primes.hpp"
#include "quadform.hpp"

namespace geneq {

struct PlaceReport {
    bool archimedean;  // true for the real place, false for a prime
    Prime p;           // meaningful when archimedean is false
    bool ok;

    std::string name() const { return archimedean ? "real" : std::to_string(p); }
};

struct GenusReport {
    bool same;
    std::vector<PlaceReport> places;
};

namespace detail {

inline Integer entry_denominator_content(const RatMatrix& a) {
    Integer l(1);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) l = integer_lcm(l, denominator(a(i, j)));
    return l;
}

}  // namespace detail

// Primes where Z_p-equivalence of f and g is not automatic.
inline PrimeSet genus_critical_primes(const QuadraticForm& f, const QuadraticForm& g,
                                      const PrimeSet& extra = PrimeSet()) {
    Integer carrier = 2;
    carrier *= numerator(f.det()) * denominator(f.det());
    carrier *= numerator(g.det()) * denominator(g.det());
    carrier *= detail::entry_denominator_content(f.gram());
    carrier *= detail::entry_denominator_content(g.gram());
    std::vector<Prime> ps = prime_factors(abs(carrier));
    for (Prime p : extra) ps.push_back(p);
    return PrimeSet(ps);
}

inline GenusReport same_genus(const QuadraticForm& f, const QuadraticForm& g,
                              const PrimeSet& extra = PrimeSet()) {
    if (f.dim() != g.dim()) throw std::invalid_argument("same_genus: dimension mismatch");
    GenusReport report;
    report.same = true;

    PlaceReport real{true, 0, signature(f) == signature(g)};
    report.places.push_back(real);
    if (!real.ok) report.same = false;

    for (Prime p : genus_critical_primes(f, g, extra)) {
        bool ok = true;
        try {
            local_equiv(f.gram(), g.gram(), p, 6);
        } catch (const NotLocallyEquivalentError&) {
            ok = false;
        }
        report.places.push_back(PlaceReport{false, p, ok});
        if (!ok) report.same = false;
    }
    return report;
}

}  // namespace geneq
