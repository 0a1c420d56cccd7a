#pragma once

// Matrices over Q_p known to finite precision. A value is stored as
//
//     p^{-shift} * (residue + p^prec * M_n(Z_p)),   residue in [0, p^prec)
//
// so `prec` counts meaningful digits of the integer part and `shift` tracks
// denominators. Arithmetic combines precisions conservatively: the tracked
// precision is never more than the true agreement with the exact value, at
// the cost of sometimes claiming less (each inverse gives up 2*v_p(det)
// digits). Operations that would need digits beyond the tracked precision
// throw PrecisionError, which callers treat as "retry with more digits".

#include <optional>
#include <stdexcept>

#include "matrix.hpp"
#include "rational.hpp"

namespace geneq {

struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline Integer int_determinant(const IntMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    Integer det(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (a(0, j) == 0) continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = a(r, c);
            }
        }
        Integer term = a(0, j) * int_determinant(minor);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

inline IntMatrix int_adjugate(const IntMatrix& a) {
    const std::size_t n = a.rows();
    IntMatrix adj(n, n);
    if (n == 1) { adj(0, 0) = 1; return adj; }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            std::size_t rr = 0;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::size_t cc = 0;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            Integer cof = int_determinant(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

}  // namespace detail

class PadicMatrix {
public:
    PadicMatrix(Prime p, std::size_t rows, std::size_t cols, long prec)
        : p_(p), shift_(0), prec_(require_positive(prec)), residue_(rows, cols) {}

    static PadicMatrix identity(Prime p, std::size_t n, long prec) {
        PadicMatrix m(p, n, n, prec);
        for (std::size_t i = 0; i < n; ++i) m.residue_(i, i) = 1;
        return m;
    }

    // Exact rational input; the p-part of denominators becomes the shift.
    static PadicMatrix from_rational(const RatMatrix& a, Prime p, long prec) {
        long s = 0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (a(i, j) != 0) {
                    long v = valuation(a(i, j), p);
                    if (-v > s) s = -v;
                }
        PadicMatrix m(p, a.rows(), a.cols(), prec);
        m.shift_ = s;
        const Integer mod = prime_power(p, static_cast<unsigned long>(prec));
        const Integer ps = prime_power(p, static_cast<unsigned long>(s));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                if (a(i, j) == 0) continue;
                Rational scaled = a(i, j) * ps;  // now p-integral
                m.residue_(i, j) = residue_of(scaled, p, mod);
            }
        return m;
    }

    Prime prime() const { return p_; }
    std::size_t rows() const { return residue_.rows(); }
    std::size_t cols() const { return residue_.cols(); }
    long precision() const { return prec_; }
    long shift() const { return shift_; }
    const IntMatrix& residue() const { return residue_; }

    // Canonical rational representative of one entry.
    Rational entry_rational(std::size_t i, std::size_t j) const {
        return make_rational(residue_(i, j),
                             prime_power(p_, static_cast<unsigned long>(std::max(shift_, 0l)))) *
               prime_power_rational(p_, std::max(-shift_, 0l));
    }

    RatMatrix to_rational_matrix() const {
        RatMatrix r(rows(), cols());
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) r(i, j) = entry_rational(i, j);
        return r;
    }

    PadicMatrix transpose() const {
        PadicMatrix t(p_, cols(), rows(), prec_);
        t.shift_ = shift_;
        t.residue_ = residue_.transpose();
        return t;
    }

    friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
        return a.combine(b, +1);
    }
    friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
        return a.combine(b, -1);
    }

    friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
        a.require_same_prime(b);
        if (a.cols() != b.rows()) throw std::invalid_argument("PadicMatrix: shape mismatch");
        PadicMatrix r(a.p_, a.rows(), b.cols(), std::min(a.prec_, b.prec_));
        r.shift_ = a.shift_ + b.shift_;
        const Integer mod = r.modulus();
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) {
                Integer acc(0);
                for (std::size_t k = 0; k < a.cols(); ++k)
                    acc += a.residue_(i, k) * b.residue_(k, j);
                r.residue_(i, j) = mod_reduce(acc, mod);
            }
        r.strip_common_power();
        return r;
    }

    PadicMatrix operator-() const {
        PadicMatrix r(*this);
        const Integer mod = modulus();
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j)
                r.residue_(i, j) = mod_reduce(-residue_(i, j), mod);
        return r;
    }

    // Multiply by an exact rational scalar.
    PadicMatrix scale(const Rational& q) const {
        if (q == 0) { PadicMatrix z(p_, rows(), cols(), prec_); return z; }
        long v = valuation(q, p_);
        Rational unit = q * prime_power_rational(p_, -v);  // p-unit
        PadicMatrix r(*this);
        r.shift_ -= v;
        const Integer mod = modulus();
        Integer u = residue_of(unit, p_, mod);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j)
                r.residue_(i, j) = mod_reduce(residue_(i, j) * u, mod);
        r.strip_common_power();
        return r;
    }

    // Inverse via exact adjugate of the stored residue. Gives up
    // 2*v_p(det) digits of precision, the conservative worst case.
    PadicMatrix inverse() const {
        if (rows() != cols()) throw std::invalid_argument("PadicMatrix: not square");
        const std::size_t n = rows();
        const Integer mod = modulus();
        Integer det = mod_reduce(detail::int_determinant(residue_), mod);
        if (det == 0)
            throw PrecisionError("PadicMatrix::inverse: determinant vanishes to precision");
        long k = valuation(det, p_);
        if (2 * k >= prec_)
            throw PrecisionError("PadicMatrix::inverse: determinant valuation too high");
        const long nprec = prec_ - 2 * k;
        const Integer nmod = prime_power(p_, static_cast<unsigned long>(nprec));
        Integer unit = det / prime_power(p_, static_cast<unsigned long>(k));
        Integer uinv;
        if (mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), nmod.get_mpz_t()) == 0)
            throw std::logic_error("PadicMatrix::inverse: unit not invertible");
        IntMatrix adj = detail::int_adjugate(residue_);
        PadicMatrix r(p_, n, n, nprec);
        r.shift_ = k - shift_;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                // adj/det = p^{-k} * adj * unit^{-1}; adj entries must carry
                // the factor p^k only jointly with det, so divide exactly.
                r.residue_(i, j) = mod_reduce(adj(i, j) * uinv, nmod);
            }
        r.strip_common_power();
        return r;
    }

    // Smallest valuation of the represented value over all entries, or
    // nullopt when every entry vanishes to the tracked precision (then the
    // value's valuation is at least prec - shift).
    std::optional<long> min_valuation() const {
        std::optional<long> best;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                if (residue_(i, j) == 0) continue;
                long v = valuation(residue_(i, j), p_) - shift_;
                if (!best || v < *best) best = v;
            }
        return best;
    }

    // Upper bound on ||.||_p from the residue; exact when min_valuation is
    // determined, p^{shift-prec} otherwise.
    Rational padic_norm_upper() const {
        auto v = min_valuation();
        if (v) return prime_power_rational(p_, -*v);
        return prime_power_rational(p_, shift_ - prec_);
    }

    // v_p(det), exact when it resolves below the precision; nullopt means
    // only the bound v_p(det) >= prec - n*shift is known.
    std::optional<long> det_valuation() const {
        if (rows() != cols()) throw std::invalid_argument("PadicMatrix: not square");
        Integer det = mod_reduce(detail::int_determinant(residue_),  modulus());
        if (det == 0) return std::nullopt;
        return valuation(det, p_) - static_cast<long>(rows()) * shift_;
    }

    PadicMatrix reduce_to(long prec) const {
        if (prec >= prec_) return *this;
        PadicMatrix r(p_, rows(), cols(), prec);
        r.shift_ = shift_;
        const Integer mod = r.modulus();
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j)
                r.residue_(i, j) = mod_reduce(residue_(i, j), mod);
        r.strip_common_power();
        return r;
    }

    // Do the two values agree to `digits` p-adic digits past p^0? I.e. is
    // ||a - b||_p <= p^{-digits} as far as both precisions can tell?
    bool agrees_with(const PadicMatrix& other, long digits) const {
        PadicMatrix d = *this - other;
        auto v = d.min_valuation();
        if (!v) return true;
        return *v >= digits;
    }

    Integer modulus() const { return prime_power(p_, static_cast<unsigned long>(prec_)); }

    static Integer residue_of(const Rational& q, Prime, const Integer& mod) {
        // q must be p-integral here.
        Integer den_inv;
        if (mpz_invert(den_inv.get_mpz_t(), denominator(q).get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::invalid_argument("PadicMatrix: entry not p-integral");
        return mod_reduce(numerator(q) * den_inv, mod);
    }

    static Integer mod_reduce(const Integer& x, const Integer& mod) {
        Integer r = x % mod;
        if (r < 0) r += mod;
        return r;
    }

private:
    static long require_positive(long prec) {
        if (prec <= 0) throw std::invalid_argument("PadicMatrix: precision must be positive");
        return prec;
    }

    void require_same_prime(const PadicMatrix& o) const {
        if (p_ != o.p_) throw std::invalid_argument("PadicMatrix: prime mismatch");
    }

    PadicMatrix combine(const PadicMatrix& b, int sign) const {
        require_same_prime(b);
        if (rows() != b.rows() || cols() != b.cols())
            throw std::invalid_argument("PadicMatrix: shape mismatch");
        const long s = std::max(shift_, b.shift_);
        // Aligning to the larger shift rescales each residue; the rescaled
        // precision grows with the scale, so the combined precision is the
        // smaller of the two adjusted values.
        const long prec = std::min(prec_ + (s - shift_), b.prec_ + (s - b.shift_));
        PadicMatrix r(p_, rows(), cols(), prec);
        r.shift_ = s;
        const Integer mod = r.modulus();
        const Integer fa = prime_power(p_, static_cast<unsigned long>(s - shift_));
        const Integer fb = prime_power(p_, static_cast<unsigned long>(s - b.shift_));
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                Integer x = residue_(i, j) * fa;
                Integer y = b.residue_(i, j) * fb;
                Integer z = sign > 0 ? Integer(x + y) : Integer(x - y);
                r.residue_(i, j) = mod_reduce(z, mod);
            }
        r.strip_common_power();
        return r;
    }

    // Remove p-powers common to the shift and every residue entry; keeps
    // representations of p-integral values at shift 0.
    void strip_common_power() {
        while (shift_ > 0 && prec_ > 1) {
            for (std::size_t i = 0; i < rows(); ++i)
                for (std::size_t j = 0; j < cols(); ++j)
                    if (!mpz_divisible_ui_p(residue_(i, j).get_mpz_t(), p_)) return;
            const Integer pz(p_);
            for (std::size_t i = 0; i < rows(); ++i)
                for (std::size_t j = 0; j < cols(); ++j)
                    residue_(i, j) /= pz;
            --shift_;
            --prec_;
        }
    }

    Prime p_;
    long shift_;
    long prec_;
    IntMatrix residue_;
};

}  // namespace geneq
