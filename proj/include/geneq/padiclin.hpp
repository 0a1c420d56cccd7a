#pragma once

// Local linear algebra at a prime p: determinant stability under small
// perturbation, sign-matrix selection, symmetric diagonalization over Z_p
// (odd p), Newton/Hensel refinement of approximate isometries, and the
// local equivalence solver (digit-by-digit seed search plus lifting).

#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "padic.hpp"
#include "padic_matrix.hpp"
#include "primes.hpp"

namespace geneq {

// Diagonal matrix with entries +1/-1.
struct SignMatrix {
    std::vector<int> diag;

    std::size_t size() const { return diag.size(); }

    static SignMatrix all_plus(std::size_t n) { return SignMatrix{std::vector<int>(n, 1)}; }

    // Enumeration index in the order (+1 before -1, first slot most
    // significant); index 0 is the identity.
    static SignMatrix from_index(std::size_t n, std::size_t idx) {
        SignMatrix e{std::vector<int>(n)};
        for (std::size_t k = 0; k < n; ++k)
            e.diag[k] = ((idx >> (n - 1 - k)) & 1) ? -1 : 1;
        return e;
    }

    RatMatrix to_matrix() const {
        RatMatrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = Rational(diag[i]);
        return m;
    }

    friend bool operator==(const SignMatrix& a, const SignMatrix& b) { return a.diag == b.diag; }
};

// ||Y - X||_p < |det X|_p / h_p(X)^n forces |det Y|_p = |det X|_p.
inline bool det_stable(const RatMatrix& x, const RatMatrix& y, Prime p) {
    Rational dx = determinant(x);
    if (dx == 0) throw std::invalid_argument("det_stable: X singular");
    const unsigned long n = static_cast<unsigned long>(x.rows());
    Rational bound = padic_abs(dx, p) / rational_pow(padic_height(x, p), n);
    return padic_norm(y - x, p) < bound;
}

// First sign matrix E (in enumeration order) with
// |det(A - E)|_p >= |2^n det A|_p; existence is guaranteed for invertible A.
inline SignMatrix choose_sign_matrix(const RatMatrix& a, Prime p) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("choose_sign_matrix: not square");
    Rational da = determinant(a);
    if (da == 0) throw std::invalid_argument("choose_sign_matrix: singular input");
    Rational threshold = padic_abs(Rational(prime_power(2, static_cast<unsigned long>(n))) * da, p);
    for (std::size_t idx = 0; idx < (std::size_t(1) << n); ++idx) {
        SignMatrix e = SignMatrix::from_index(n, idx);
        if (padic_abs(determinant(a - e.to_matrix()), p) >= threshold) return e;
    }
    throw std::logic_error("choose_sign_matrix: no sign matrix met the bound");
}

// Same selection on a finite-precision matrix. The caller supplies the
// exact threshold valuation t: E qualifies iff v_p(det(A - E)) <= t. The
// input must carry enough digits to decide every candidate.
inline SignMatrix choose_sign_matrix(const PadicMatrix& a, long threshold_valuation) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("choose_sign_matrix: not square");
    for (std::size_t idx = 0; idx < (std::size_t(1) << n); ++idx) {
        SignMatrix e = SignMatrix::from_index(n, idx);
        PadicMatrix d = a - PadicMatrix::from_rational(e.to_matrix(), a.prime(), a.precision());
        std::optional<long> v = d.det_valuation();
        if (!v) {
            // Undetermined: v_p(det) is at least the tracked bound. That
            // must itself exceed t, or we cannot decide this candidate.
            if (d.precision() - static_cast<long>(n) * d.shift() <= threshold_valuation)
                throw PrecisionError("choose_sign_matrix: not enough digits to decide");
            continue;
        }
        if (*v <= threshold_valuation) return e;
    }
    throw PrecisionError("choose_sign_matrix: no candidate met the bound at this precision");
}

namespace detail {

// Smallest s >= 0 with p^s * a p-integral, over all entries.
inline long denominator_clearing_exponent(const RatMatrix& a, Prime p) {
    long s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) {
                long v = valuation(a(i, j), p);
                if (-v > s) s = -v;
            }
    return s;
}

}  // namespace detail

struct PadicDiagonalization {
    PadicMatrix transform;  // unimodular over Z_p
    long guard_loss;        // digits spent on pivot divisions
};

// Congruence-diagonalize a regular symmetric F over Z_p, odd p only.
// Scaling F by a power of p changes the diagonal but not the transform,
// so p-denominators are cleared first. The returned transform satisfies
// transform' * F * transform = diagonal mod p^{N - guard_loss}.
inline PadicDiagonalization padic_diagonalize(const RatMatrix& f, Prime p, long target_prec) {
    if (p == 2) throw std::invalid_argument("padic_diagonalize: p = 2 not supported");
    if (!is_symmetric(f)) throw std::invalid_argument("padic_diagonalize: not symmetric");
    const std::size_t n = f.rows();
    Rational detf = determinant(f);
    if (detf == 0) throw std::invalid_argument("padic_diagonalize: singular form");

    const long a = detail::denominator_clearing_exponent(f, p);
    RatMatrix s_rat = prime_power_rational(p, a) * f;
    const long dval = valuation(determinant(s_rat), p);
    const long guard = 2 * dval + 2;
    const long w = target_prec + guard;
    const Integer mod = prime_power(p, static_cast<unsigned long>(w));

    IntMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (s_rat(i, j) != 0) s(i, j) = PadicMatrix::residue_of(s_rat(i, j), p, mod);
    IntMatrix sigma(n, n);
    for (std::size_t i = 0; i < n; ++i) sigma(i, i) = 1;

    auto val = [&](const Integer& x) -> long {
        return x == 0 ? w : valuation(x, p);
    };
    auto reduce = [&](Integer& x) { x = PadicMatrix::mod_reduce(x, mod); };

    // Column operation x_i += c * x_k applied congruently to s, tracked in sigma.
    auto add_column = [&](std::size_t i, std::size_t k, const Integer& c) {
        for (std::size_t r = 0; r < n; ++r) { sigma(r, i) += c * sigma(r, k); reduce(sigma(r, i)); }
        for (std::size_t r = 0; r < n; ++r) { s(r, i) += c * s(r, k); reduce(s(r, i)); }
        for (std::size_t r = 0; r < n; ++r) { s(i, r) += c * s(k, r); reduce(s(i, r)); }
    };
    auto swap_columns = [&](std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t r = 0; r < n; ++r) std::swap(sigma(r, i), sigma(r, k));
        for (std::size_t r = 0; r < n; ++r) std::swap(s(r, i), s(r, k));
        for (std::size_t r = 0; r < n; ++r) std::swap(s(i, r), s(k, r));
    };

    for (std::size_t k = 0; k < n; ++k) {
        // Pivot: prefer the first minimum-valuation diagonal entry; if an
        // off-diagonal entry has strictly smaller valuation, fold its mate
        // in first (p odd makes 2 a unit, so the new diagonal entry takes
        // exactly the off-diagonal valuation).
        long best_diag = w + 1, best_off = w + 1;
        std::size_t di = k, oi = k, oj = k;
        for (std::size_t i = k; i < n; ++i)
            if (val(s(i, i)) < best_diag) { best_diag = val(s(i, i)); di = i; }
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (val(s(i, j)) < best_off) { best_off = val(s(i, j)); oi = i; oj = j; }
        if (best_diag > w && best_off > w)
            throw PrecisionError("padic_diagonalize: block vanished to working precision");
        if (best_off < best_diag) add_column(oi, oj, Integer(1));
        else oi = di;
        swap_columns(k, oi);

        const long piv_val = val(s(k, k));
        const Integer pk = prime_power(p, static_cast<unsigned long>(piv_val));
        Integer unit = s(k, k) / pk;
        Integer uinv;
        if (mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("padic_diagonalize: pivot unit not invertible");
        for (std::size_t i = k + 1; i < n; ++i) {
            if (s(k, i) == 0) continue;
            if (val(s(k, i)) < piv_val)
                throw std::logic_error("padic_diagonalize: pivot not minimal");
            Integer m = PadicMatrix::mod_reduce((s(k, i) / pk) * uinv, mod);
            if (m == 0) continue;
            add_column(i, k, Integer(mod - m));
        }
    }

    RatMatrix lifted(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lifted(i, j) = Rational(sigma(i, j));
    PadicMatrix out = PadicMatrix::from_rational(lifted, p, target_prec);
    return PadicDiagonalization{out, guard};
}

// One Newton refinement step for X' F X = G at p. The update is
// dX = (X'F)^{-1} (G - X'FX) / 2; with residual valuation k and
// c = v_p(2) + log_p ||(X'F)^{-1}||_p, the precondition is k > c and the
// refined residual has valuation at least 2(k - c).
inline PadicMatrix hensel_step(const RatMatrix& f, const RatMatrix& g, const PadicMatrix& x) {
    const Prime p = x.prime();
    const long a = std::max(detail::denominator_clearing_exponent(f, p),
                            detail::denominator_clearing_exponent(g, p));
    RatMatrix fs = prime_power_rational(p, a) * f;
    RatMatrix gs = prime_power_rational(p, a) * g;
    PadicMatrix fp = PadicMatrix::from_rational(fs, p, x.precision());
    PadicMatrix gp = PadicMatrix::from_rational(gs, p, x.precision());

    PadicMatrix xf = x.transpose() * fp;
    PadicMatrix residual = gp - xf * x;
    std::optional<long> k = residual.min_valuation();
    if (!k) return x;  // already exact to working precision
    PadicMatrix xf_inv = xf.inverse();
    std::optional<long> w = xf_inv.min_valuation();
    const long c = (p == 2 ? 1 : 0) + std::max(0l, w ? -*w : 0l);
    if (*k <= c) throw std::invalid_argument("hensel_step: residual valuation at or below threshold");
    PadicMatrix delta = (xf_inv * residual).scale(make_rational(1, 2));
    return x + delta;
}

namespace detail {

// Digit-by-digit column search for X with X' F X = G mod p^{e0}. Residues
// fit machine words at desk scale; the enumeration is exhaustive, so a
// fruitless run certifies that no solution exists mod p^{e0}.
class SeedSearch {
public:
    SeedSearch(const IntMatrix& f, const IntMatrix& g, Prime p, long e0)
        : p_(p), e0_(e0), n_(f.rows()) {
        m_ = 1;
        for (long i = 0; i < e0; ++i) {
            if (m_ > (std::uint64_t(1) << 31) / p)
                throw std::invalid_argument("local_equiv: seed modulus exceeds machine range");
            m_ *= p;
        }
        fm_.assign(n_ * n_, 0);
        gm_.assign(n_ * n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                fm_[i * n_ + j] = mod_u64(f(i, j));
                gm_[i * n_ + j] = mod_u64(g(i, j));
            }
        cols_.assign(n_, std::vector<std::uint64_t>(n_, 0));
        fcols_.assign(n_, std::vector<std::uint64_t>(n_, 0));
    }

    // Returns the first full solution in enumeration order, if any.
    std::optional<IntMatrix> run() {
        found_.reset();
        search_column(0);
        return found_;
    }

private:
    std::uint64_t mod_u64(const Integer& x) const {
        Integer r = PadicMatrix::mod_reduce(x, Integer(static_cast<unsigned long>(m_)));
        return r.get_ui();
    }

    std::uint64_t quad(const std::vector<std::uint64_t>& t) const {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                acc = (acc + t[i] % m_ * (t[j] % m_) % m_ * fm_[i * n_ + j]) % m_;
        return acc;
    }

    std::uint64_t cross(const std::vector<std::uint64_t>& t, std::size_t prev) const {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < n_; ++i)
            acc = (acc + t[i] % m_ * fcols_[prev][i]) % m_;
        return acc;
    }

    bool column_ok(const std::vector<std::uint64_t>& t, std::size_t j,
                   std::uint64_t level_mod) const {
        if (quad(t) % level_mod != gm_[j * n_ + j] % level_mod) return false;
        for (std::size_t i = 0; i < j; ++i)
            if (cross(t, i) % level_mod != gm_[j * n_ + i] % level_mod) return false;
        return true;
    }

    bool search_column(std::size_t j) {
        // Level 0 enumerates t mod p starting at the j-th basis vector, so
        // near-identity solutions are found first.
        std::vector<std::uint64_t> t(n_, 0);
        return lift(j, t, 0);
    }

    bool lift(std::size_t j, std::vector<std::uint64_t>& t, long level) {
        if (level == e0_) {
            cols_[j] = t;
            for (std::size_t i = 0; i < n_; ++i) {
                std::uint64_t acc = 0;
                for (std::size_t r = 0; r < n_; ++r)
                    acc = (acc + fm_[i * n_ + r] * t[r]) % m_;
                fcols_[j][i] = acc;
            }
            if (j + 1 == n_) return finish();
            return search_column(j + 1);
        }
        std::uint64_t step = 1;
        for (long i = 0; i < level; ++i) step *= p_;
        const std::uint64_t level_mod = step * p_;
        std::vector<std::uint64_t> digits(n_, 0);
        std::vector<std::uint64_t> cand(n_);
        const std::size_t total = ipow(p_, n_);
        for (std::size_t it = 0; it < total; ++it) {
            for (std::size_t i = 0; i < n_; ++i) {
                std::uint64_t d = digits[i];
                if (level == 0 && i == j) d = (d + 1) % p_;  // basis-vector offset
                cand[i] = (t[i] + step * d) % m_;
            }
            if (column_ok(cand, j, level_mod)) {
                std::vector<std::uint64_t> next = cand;
                if (lift(j, next, level + 1)) return true;
            }
            // odometer over digits, last coordinate fastest
            std::size_t pos = n_;
            while (pos > 0) {
                --pos;
                if (++digits[pos] < p_) break;
                digits[pos] = 0;
            }
        }
        return false;
    }

    bool finish() {
        // Full assignment mod p^{e0}; require a unit determinant so the
        // Newton refinement applies. Non-unit hits keep the search going.
        IntMatrix x(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t jj = 0; jj < n_; ++jj)
                x(i, jj) = Integer(static_cast<unsigned long>(cols_[jj][i]));
        Integer det = detail::int_determinant(x);
        if (mpz_divisible_ui_p(det.get_mpz_t(), p_)) return false;
        found_ = x;
        return true;
    }

    static std::size_t ipow(Prime p, std::size_t e) {
        std::size_t r = 1;
        while (e--) r *= p;
        return r;
    }

    Prime p_;
    long e0_;
    std::size_t n_;
    std::uint64_t m_;
    std::vector<std::uint64_t> fm_, gm_;
    std::vector<std::vector<std::uint64_t>> cols_, fcols_;
    std::optional<IntMatrix> found_;
};

}  // namespace detail

struct LocalEquivalence {
    PadicMatrix sigma_p;  // X with X' F X = G to the reported precision
    long guard_loss;
};

// Find X in GL_n(Z_p) with X' F X = G to p-adic precision target_prec, or
// prove there is none. The seed modulus p^{e0} is large enough that any
// exact solution reduces to a liftable seed, so exhausting the seed space
// certifies non-equivalence over Z_p.
inline LocalEquivalence local_equiv(const RatMatrix& f, const RatMatrix& g, Prime p,
                                    long target_prec) {
    if (!is_symmetric(f) || !is_symmetric(g))
        throw std::invalid_argument("local_equiv: forms must be symmetric");
    if (f.rows() != g.rows()) throw std::invalid_argument("local_equiv: dimension mismatch");
    const std::size_t n = f.rows();
    Rational detf = determinant(f), detg = determinant(g);
    if (detf == 0 || detg == 0) throw std::invalid_argument("local_equiv: singular form");

    const long a = std::max(detail::denominator_clearing_exponent(f, p),
                            detail::denominator_clearing_exponent(g, p));
    RatMatrix fs = prime_power_rational(p, a) * f;
    RatMatrix gs = prime_power_rational(p, a) * g;
    const long df = valuation(determinant(fs), p);
    const long dg = valuation(determinant(gs), p);
    // Any solution forces |det X|_p^2 = |det G|_p / |det F|_p; a unimodular
    // one needs the valuations to match exactly.
    if (df != dg) throw NotLocallyEquivalentError(p);

    const long v4 = (p == 2 ? 2 : 0);
    long e0 = v4 + a + df + 1 + (p == 2 ? 2 : 0);

    const Integer seed_mod = prime_power(p, static_cast<unsigned long>(e0));
    IntMatrix fres(n, n), gres(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (fs(i, j) != 0) fres(i, j) = PadicMatrix::residue_of(fs(i, j), p, seed_mod);
            if (gs(i, j) != 0) gres(i, j) = PadicMatrix::residue_of(gs(i, j), p, seed_mod);
        }
    detail::SeedSearch search(fres, gres, p, e0);
    std::optional<IntMatrix> seed = search.run();
    if (!seed) throw NotLocallyEquivalentError(p);

    // Newton refinement. The residual valuation k satisfies
    // k' >= min(2k - (v_p(4) + dg), rebuild limit) and the seed starts
    // strictly above v_p(4) + dg, so k climbs until one bound bites. Each
    // step rebuilds the iterate from its residues, exact only to
    // w - 3*df - v_p(2) digits (the inverse gives up 2*df, the shift
    // another df + v_p(2)), so w puts that limit past the exit threshold.
    const long c = (p == 2 ? 1 : 0) + df;
    const long w = target_prec + c + 3 * df + (p == 2 ? 1 : 0) + 4;
    const Integer mod = prime_power(p, static_cast<unsigned long>(w));
    PadicMatrix fp = PadicMatrix::from_rational(fs, p, w);
    PadicMatrix gp = PadicMatrix::from_rational(gs, p, w);
    RatMatrix seed_rat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) seed_rat(i, j) = Rational((*seed)(i, j));
    PadicMatrix x = PadicMatrix::from_rational(seed_rat, p, w);

    long last_k = -1;
    for (int iter = 0; iter < 200; ++iter) {
        PadicMatrix xf = x.transpose() * fp;
        PadicMatrix residual = gp - xf * x;
        std::optional<long> k = residual.min_valuation();
        if (!k || *k >= target_prec + c) {
            PadicMatrix out = x.reduce_to(target_prec);
            return LocalEquivalence{out, c + df + 4};
        }
        if (*k <= c || *k <= last_k)
            throw PrecisionError("local_equiv: Newton refinement stalled");
        last_k = *k;
        PadicMatrix delta = (xf.inverse() * residual).scale(make_rational(1, 2));
        // Rebuild at full working precision: Newton self-corrects, so the
        // conservative loss tracked inside delta must not compound.
        RatMatrix next = (x + delta).to_rational_matrix();
        x = PadicMatrix::from_rational(next, p, w);
    }
    throw PrecisionError("local_equiv: refinement did not converge");
}

}  // namespace geneq
