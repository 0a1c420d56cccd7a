#pragma once

// The end-to-end construction. Given F, G, a prime set, a rational
// equivalence sigma and a diagonalizer of F, build the global candidate tau
// and the local transforms tau_p, extract the local skew data U_p, glue the
// strictly-upper entries into one exact skew matrix U by CRT, and push tau
// through the Cayley transform at U. The congruence tau_hat' F tau_hat = G
// is an algebraic identity for any exact skew U, so approximation quality
// only ever threatens p-integrality; every claim is re-checked exactly,
// and a failed check doubles the working precision and retries.

#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "cayley.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "padic.hpp"
#include "padic_matrix.hpp"
#include "padiclin.hpp"
#include "primes.hpp"
#include "quadform.hpp"
#include "represent.hpp"

namespace geneq {

struct SolveOptions {
    std::optional<RatMatrix> sigma;         // trusted after the exact check sigma' F sigma = G
    std::optional<RatMatrix> diagonalizer;  // trusted after the exact diagonality check
    Rational max_height = Rational(50);     // equivalence-search cutoff per represent step
    bool use_masser = false;                // certified cutoff instead of the practical one
    long min_precision = 0;                 // floor for the starting p-adic precision
    std::ostream* trace = nullptr;          // intermediate dumps, human-readable
};

struct VerificationReport {
    bool congruence = false;            // tau_hat' F tau_hat = G
    std::map<Prime, bool> integral;     // every entry p-integral
    std::map<Prime, bool> unit_det;     // |det tau_hat|_p = 1

    bool all_ok() const {
        if (!congruence) return false;
        for (const auto& [p, ok] : integral)
            if (!ok) return false;
        for (const auto& [p, ok] : unit_det)
            if (!ok) return false;
        return true;
    }
};

struct EquivalenceCertificate {
    RatMatrix f, g;
    std::vector<Prime> primes;
    RatMatrix sigma, diagonalizer;
    RatMatrix tau_hat;
    RatMatrix u;  // skew, d*u integral, sup norm below C/d
    std::map<Prime, SignMatrix> sign_choices;
    AvoidanceConstants constants;
    VerificationReport checks;
};

// Exact post-check of a claimed transform; failures are reported, never thrown.
inline VerificationReport verify(const QuadraticForm& f, const QuadraticForm& g,
                                 const PrimeSet& primes, const RatMatrix& tau_hat) {
    VerificationReport r;
    r.congruence = (tau_hat.transpose() * f.gram() * tau_hat == g.gram());
    Rational dt = tau_hat.rows() == tau_hat.cols() ? determinant(tau_hat) : Rational(0);
    for (Prime p : primes) {
        r.integral[p] = padic_norm(tau_hat, p) <= 1;
        r.unit_det[p] = dt != 0 && padic_abs(dt, p) == 1;
    }
    return r;
}

struct TauData {
    RatMatrix tau;
    std::map<Prime, PadicMatrix> tau_p;
    std::map<Prime, SignMatrix> sign_choices;
};

// Global tau and per-prime tau_p. At p = 2 the sign matrix is chosen so
// that det(tau - tau_2) keeps a guaranteed 2-adic size; at odd primes any
// sign matrix works for the height bound, and the choice again protects
// det(tau - tau_p). All sign selections are first-match in a fixed order,
// which keeps the whole construction deterministic.
inline TauData build_tau(const QuadraticForm& f, const QuadraticForm& g, const RatMatrix& sigma,
                         const RatMatrix& diagonalizer, const PrimeSet& primes,
                         const std::map<Prime, long>& precision) {
    const std::size_t n = f.dim();
    RatMatrix dinv = inverse(diagonalizer);
    TauData t;

    if (primes.contains(2)) {
        const long np = precision.at(2);
        PadicMatrix sigma0 = local_equiv(f.gram(), g.gram(), 2, np).sigma_p;
        PadicMatrix a0 = PadicMatrix::from_rational(dinv, 2, np) * sigma0 *
                         PadicMatrix::from_rational(inverse(sigma), 2, np) *
                         PadicMatrix::from_rational(diagonalizer, 2, np);
        // |2^n det a0|_2 with det sigma0 a unit: n - v_2(det sigma)
        const long threshold = static_cast<long>(n) - valuation(determinant(sigma), 2);
        SignMatrix e0 = choose_sign_matrix(a0, threshold);
        t.sign_choices.emplace(2, e0);
        t.tau = diagonalizer * e0.to_matrix() * dinv * sigma;
        t.tau_p.emplace(2, sigma0);
    } else {
        t.tau = sigma;
    }

    for (Prime p : primes) {
        if (p == 2) continue;
        const long np = precision.at(p);
        PadicMatrix sp = padic_diagonalize(f.gram(), p, np).transform;
        PadicMatrix sigp = local_equiv(f.gram(), g.gram(), p, np).sigma_p;
        PadicMatrix spinv = sp.inverse();
        PadicMatrix ap =
            spinv * PadicMatrix::from_rational(t.tau, p, np) * sigp.inverse() * sp;
        // |2^n det ap|_p at odd p: just v_p(det tau)
        const long threshold = valuation(determinant(t.tau), p);
        SignMatrix ep = choose_sign_matrix(ap, threshold);
        t.sign_choices.emplace(p, ep);
        PadicMatrix ep_pad = PadicMatrix::from_rational(ep.to_matrix(), p, np);
        t.tau_p.emplace(p, sp * ep_pad * spinv * sigp);
    }
    return t;
}

// Local skew data: U_p = 2F(I - tau_p tau^{-1})^{-1} - F. The inverse
// throws when det vanishes to working precision, which the retry loop
// treats as a request for more digits.
inline PadicMatrix compute_Up(const QuadraticForm& f, const RatMatrix& tau,
                              const PadicMatrix& tau_p) {
    const Prime p = tau_p.prime();
    const long prec = tau_p.precision();
    PadicMatrix tinv = PadicMatrix::from_rational(inverse(tau), p, prec);
    PadicMatrix one = PadicMatrix::from_rational(RatMatrix::identity(f.dim()), p, prec);
    PadicMatrix fp = PadicMatrix::from_rational(f.gram(), p, prec);
    PadicMatrix core = (one - tau_p * tinv).inverse();
    return (fp * core).scale(Rational(2)) - fp;
}

// One integer z with |z/d - x_p|_p < eps simultaneously for every p, via
// CRT on d*x_p to ell_p digits; 0 <= z < prod p^{ell_p}.
inline Integer crt_approximate(const std::map<Prime, Rational>& targets, const Integer& d,
                               const Rational& eps, const PrimeSet& primes) {
    if (d <= 0) throw std::invalid_argument("crt_approximate: d must be positive");
    if (eps <= 0 || eps > 1) throw std::invalid_argument("crt_approximate: eps out of range");
    const Rational bound = Rational(d) / eps;
    Integer modulus(1), z(0);
    for (Prime p : primes) {
        Rational dx = Rational(d) * targets.at(p);
        if (dx != 0 && valuation(dx, p) < 0)
            throw std::invalid_argument("crt_approximate: d*x not p-integral");
        const long ell = crt_digit_count(p, bound);
        const Integer pl = prime_power(p, static_cast<unsigned long>(ell));
        const Integer r = PadicMatrix::residue_of(dx, p, pl);
        Integer minv;
        if (mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pl.get_mpz_t()) == 0)
            throw std::logic_error("crt_approximate: moduli collided");
        Integer step = PadicMatrix::mod_reduce((r - z) * minv, pl);
        z += modulus * step;
        modulus *= pl;
    }
    return z;
}

// Entry-wise CRT on the strictly-upper triangle; the lower triangle is the
// exact negation and the diagonal is zero, so U is exactly skew whatever
// the approximation quality.
inline RatMatrix skew_approximate(const std::map<Prime, PadicMatrix>& u_targets,
                                  const AvoidanceConstants& constants, const PrimeSet& primes) {
    if (u_targets.empty()) throw std::invalid_argument("skew_approximate: no targets");
    const std::size_t n = u_targets.begin()->second.rows();
    for (Prime p : primes) {
        const PadicMatrix& up = u_targets.at(p);
        const PrimeAvoidance& pa = constants.per_prime.at(p);
        const long aexp = valuation(pa.alpha, p);
        if (up.precision() - up.shift() < pa.ell + aexp + 2)
            throw PrecisionError("skew_approximate: too few digits to place the residues");
    }
    RatMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::map<Prime, Rational> targets;
            for (Prime p : primes) targets.emplace(p, u_targets.at(p).entry_rational(i, j));
            Integer z = crt_approximate(targets, constants.d, constants.eps, primes);
            u(i, j) = make_rational(z, constants.d);
            u(j, i) = -u(i, j);
        }
    return u;
}

namespace detail {

inline void trace_matrix(std::ostream& out, const char* label, const RatMatrix& m) {
    out << label << ":\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << "  [";
        for (std::size_t j = 0; j < m.cols(); ++j)
            out << (j ? ", " : "") << format_rational(m(i, j));
        out << "]\n";
    }
}

inline EquivalenceCertificate solve_round(const QuadraticForm& f, const QuadraticForm& g,
                                          const PrimeSet& primes, const RatMatrix& sigma,
                                          const RatMatrix& diagonalizer,
                                          const AvoidanceConstants& constants,
                                          const std::map<Prime, long>& precision,
                                          const SolveOptions& options) {
    const std::size_t n = f.dim();
    const unsigned long nu = static_cast<unsigned long>(n);
    std::ostream* trace = options.trace;

    TauData taud = build_tau(f, g, sigma, diagonalizer, primes, precision);
    if (trace) {
        *trace << "precision:";
        for (const auto& [p, np] : precision) *trace << " " << p << "->" << np;
        *trace << "\n";
        trace_matrix(*trace, "tau", taud.tau);
        for (const auto& [p, tp] : taud.tau_p)
            trace_matrix(*trace, ("tau_p at " + std::to_string(p)).c_str(),
                         tp.to_rational_matrix());
    }

    std::map<Prime, PadicMatrix> u_targets;
    std::map<Prime, long> det_floor;
    for (Prime p : primes) {
        PadicMatrix up = compute_Up(f, taud.tau, taud.tau_p.at(p));
        PadicMatrix upf = up + PadicMatrix::from_rational(f.gram(), p, up.precision());
        std::optional<long> dv = upf.det_valuation();
        if (!dv) throw PrecisionError("solve: det(U_p + F) undetermined at working precision");
        const PrimeAvoidance& pa = constants.per_prime.at(p);
        if (*dv > -valuation(pa.beta, p))
            throw std::logic_error("solve: local determinant dropped below its floor");
        det_floor.emplace(p, *dv);
        if (trace) trace_matrix(*trace, ("U_p at " + std::to_string(p)).c_str(),
                                up.to_rational_matrix());
        u_targets.emplace(p, up);
    }

    RatMatrix u = skew_approximate(u_targets, constants, primes);
    if (!is_skew_symmetric(u)) throw std::logic_error("solve: assembled U not skew");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (denominator(Rational(constants.d) * u(i, j)) != 1)
                throw std::logic_error("solve: d*U not integral");
    if (!(sup_norm(u) <= make_rational(constants.C, constants.d)))
        throw std::logic_error("solve: U escaped its box");
    if (trace) trace_matrix(*trace, "U", u);

    for (Prime p : primes) {
        const PadicMatrix& up = u_targets.at(p);
        const PrimeAvoidance& pa = constants.per_prime.at(p);
        Rational rp = pa.beta / (pa.kappa * rational_pow(Rational(pa.alpha), nu));
        PadicMatrix diff = PadicMatrix::from_rational(u, p, up.precision()) - up;
        if (!(diff.padic_norm_upper() < rp))
            throw PrecisionError("solve: U strayed from a local target");
    }

    RatMatrix tau_hat = cayley(u, f) * taud.tau;
    if (trace) trace_matrix(*trace, "tau_hat", tau_hat);

    if (!(tau_hat.transpose() * f.gram() * tau_hat == g.gram()))
        throw std::logic_error("solve: exact congruence failed");
    Rational det_upf = determinant(u + f.gram());
    for (Prime p : primes) {
        if (valuation(det_upf, p) != det_floor.at(p))
            throw std::logic_error("solve: determinant valuation drifted under approximation");
        if (!(padic_norm(tau_hat, p) <= 1))
            throw PrecisionError("solve: tau_hat not integral at a listed prime");
        if (padic_abs(determinant(tau_hat), p) != 1)
            throw PrecisionError("solve: det tau_hat not a unit at a listed prime");
        PadicMatrix diff = PadicMatrix::from_rational(tau_hat, p, precision.at(p)) -
                           taud.tau_p.at(p);
        if (!(diff.padic_norm_upper() <= 1))
            throw PrecisionError("solve: tau_hat strayed from the local transform");
    }

    EquivalenceCertificate cert;
    cert.f = f.gram();
    cert.g = g.gram();
    cert.primes.assign(primes.begin(), primes.end());
    cert.sigma = sigma;
    cert.diagonalizer = diagonalizer;
    cert.tau_hat = tau_hat;
    cert.u = u;
    cert.sign_choices = taud.sign_choices;
    cert.constants = constants;
    cert.checks = verify(f, g, primes, tau_hat);
    if (!cert.checks.all_ok()) throw std::logic_error("solve: final verification disagreed");
    return cert;
}

}  // namespace detail

// Main entry point. Throws NotLocallyEquivalentError (with the prime),
// NotRationallyEquivalentError (certified or inconclusive), or, if the
// adaptive precision ladder runs out, PrecisionExhaustedError.
inline EquivalenceCertificate solve(const QuadraticForm& f, const QuadraticForm& g,
                                    const PrimeSet& primes, const SolveOptions& options = {}) {
    if (f.dim() != g.dim()) throw std::invalid_argument("solve: dimension mismatch");
    if (primes.empty()) throw std::invalid_argument("solve: empty prime set");
    const std::size_t n = f.dim();

    // Decide the local question first: the seed search either certifies an
    // obstruction at some p or proves none exists, while the rational stage
    // can come back inconclusive. Report the certified answer preferentially.
    for (Prime p : primes) local_equiv(f.gram(), g.gram(), p, 6);

    RatMatrix sigma;
    if (options.sigma) {
        sigma = *options.sigma;
        if (sigma.rows() != n || sigma.cols() != n || determinant(sigma) == 0 ||
            !(sigma.transpose() * f.gram() * sigma == g.gram()))
            throw std::invalid_argument("solve: supplied sigma is not an exact equivalence");
    } else {
        EquivSearchResult found =
            rational_equiv_search(f, g, EquivSearchOptions{options.max_height, options.use_masser});
        if (found.status != SearchStatus::Found)
            throw NotRationallyEquivalentError(
                found.status == SearchStatus::CertifiedNone,
                found.status == SearchStatus::CertifiedNone
                    ? "signature or certified search bound excludes a solution"
                    : "no solution below the height cutoff; raise --max-height or use --masser");
        sigma = found.sigma;
    }

    RatMatrix diagonalizer;
    if (options.diagonalizer) {
        diagonalizer = *options.diagonalizer;
        if (diagonalizer.rows() != n || diagonalizer.cols() != n ||
            determinant(diagonalizer) == 0)
            throw std::invalid_argument("solve: supplied diagonalizer not invertible");
        RatMatrix d = diagonalizer.transpose() * f.gram() * diagonalizer;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && d(i, j) != 0)
                    throw std::invalid_argument("solve: supplied diagonalizer fails to diagonalize");
    } else {
        diagonalizer = orthogonal_diagonalize(f);
    }

    AvoidanceConstants constants = compute_constants(f, sigma, diagonalizer, primes);

    std::map<Prime, long> precision;
    for (Prime p : primes) {
        const PrimeAvoidance& pa = constants.per_prime.at(p);
        const long kexp = pa.kappa == 1 ? 0 : valuation(pa.kappa, p);
        long base = pa.ell + 2 * static_cast<long>(n) * kexp + 4 + (p == 2 ? 2 : 0);
        precision[p] = std::max(base, options.min_precision);
    }

    for (int round = 0; round < 8; ++round) {
        try {
            return detail::solve_round(f, g, primes, sigma, diagonalizer, constants, precision,
                                       options);
        } catch (const PrecisionError& e) {
            if (options.trace) *options.trace << "retry: " << e.what() << "\n";
            for (auto& [p, np] : precision) np *= 2;
        }
    }
    throw PrecisionExhaustedError(
        "working precision doubled 8 times without a usable approximation");
}

}  // namespace geneq
