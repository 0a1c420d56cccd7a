#pragma once

// Height-ordered search for rational representations F(t) = b, and the
// equivalence search built on it: diagonalize the target form, represent
// each diagonal value on a shrinking orthogonal complement.
//
// Heights are ordered in shells h = max(sup norm of the numerator vector,
// denominator); within a shell, denominators ascend and coordinates run in
// spiral order 0, 1, -1, 2, -2, ... with lexicographic nesting. The first
// hit in this order is the result, which makes every output reproducible.
// Exhausting all shells up to the Masser bound certifies non-representation;
// exhausting a lower caller-chosen cutoff is merely inconclusive.

#include <cstdint>
#include <vector>

#include "matrix.hpp"
#include "padic.hpp"
#include "quadform.hpp"
#include "rational.hpp"

namespace geneq {

enum class SearchStatus { Found, CertifiedNone, Inconclusive };

struct RepresentResult {
    SearchStatus status;
    RatVector vec;  // meaningful only when status == Found
};

// Effective enumeration bound: any represented value has a representative
// of inhomogeneous height at most
// 3^{(n+1)/2} n^{n+1} H^{(n+1)/2}, H the homogeneous height of the block
// form diag(F, -b). Returned as the least integer at or above the bound
// (compared in squares, so nothing is rounded down).
inline Integer masser_height_cap(const QuadraticForm& form, const Rational& b) {
    const std::size_t n = form.dim();
    RatVector flat;
    flat.reserve((n + 1) * (n + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) flat.push_back(form.gram()(i, j));
    for (std::size_t i = 0; i < 2 * n; ++i) flat.push_back(Rational(0));
    flat.push_back(-b);
    Rational h = homogeneous_height(flat);
    Rational squared = Rational(pow_integer(3, static_cast<unsigned long>(n + 1))) *
                       Rational(pow_integer(Integer(static_cast<unsigned long>(n)),
                                            2 * static_cast<unsigned long>(n + 1))) *
                       rational_pow(h, static_cast<unsigned long>(n + 1));
    return ceil_sqrt(squared);
}

namespace detail {

// One shell of the (v, q) enumeration over a fixed integer type. fm is the
// denominator-cleared Gram matrix, target = cleared b; a candidate passes
// when v' fm v = target q^2 and gcd(content(v), q) = 1. Returns true and
// fills out on the first hit in enumeration order.
template <typename I>
class ShellScan {
public:
    ShellScan(const std::vector<I>& fm, const I& target, std::size_t n, long long h)
        : fm_(fm), target_(target), n_(n), h_(h), v_(n) {}

    bool scan(std::vector<long long>& out_v, long long& out_q) {
        for (long long q = 1; q <= h_; ++q) {
            q_ = q;
            box_ = (q == h_);
            if (dfs(0, false)) {
                out_v.assign(v_.begin(), v_.end());
                out_q = q;
                return true;
            }
        }
        return false;
    }

private:
    bool dfs(std::size_t i, bool bound_hit) {
        if (i == n_) return check();
        // A non-box shell pair (q < h) must touch the boundary somewhere;
        // once only the last coordinate is left, jump straight to it.
        const long long start = (!box_ && !bound_hit && i + 1 == n_) ? h_ : 0;
        for (long long a = start; a <= h_; ++a) {
            for (int sgn = 0; sgn < (a == 0 ? 1 : 2); ++sgn) {
                v_[i] = sgn == 0 ? a : -a;
                if (dfs(i + 1, bound_hit || a == h_)) return true;
            }
        }
        return false;
    }

    bool check() const {
        long long g = q_;
        for (std::size_t i = 0; i < n_; ++i) g = gcd_ll(g, v_[i] < 0 ? -v_[i] : v_[i]);
        if (g != 1) return false;
        I acc(0);
        for (std::size_t i = 0; i < n_; ++i) {
            if (v_[i] == 0) continue;
            I row(0);
            for (std::size_t j = 0; j < n_; ++j)
                if (v_[j] != 0) row += fm_[i * n_ + j] * widen(v_[j]);
            acc += widen(v_[i]) * row;
        }
        return acc == target_ * widen(q_) * widen(q_);
    }

    // Shell coordinates fit in a long (mpz_class lacks a long long ctor).
    static I widen(long long x) { return I(static_cast<long>(x)); }

    static long long gcd_ll(long long a, long long b) {
        while (b != 0) { long long t = a % b; a = b; b = t; }
        return a;
    }

    const std::vector<I>& fm_;
    I target_;
    std::size_t n_;
    long long h_, q_ = 1;
    bool box_ = false;
    std::vector<long long> v_;
};

}  // namespace detail

// First t (in the shell order described above) with F(t) = b and
// inhomogeneous height at most cutoff. CertifiedNone needs the cutoff to
// reach the Masser cap; otherwise an exhausted search is Inconclusive.
inline RepresentResult represent(const QuadraticForm& form, const Rational& b,
                                 const Rational& cutoff) {
    if (b == 0) throw std::invalid_argument("represent: b must be nonzero");
    const std::size_t n = form.dim();
    const bool certifying = cutoff >= Rational(masser_height_cap(form, b));

    if (n == 1) {
        // Complete algebraic case: t^2 = b / f11 has a rational root or not.
        Rational root;
        if (!exact_sqrt(b / form.gram()(0, 0), root))
            return {SearchStatus::CertifiedNone, {}};
        if (inhomogeneous_height({root}) > cutoff)
            return {certifying ? SearchStatus::CertifiedNone : SearchStatus::Inconclusive, {}};
        return {SearchStatus::Found, {root}};
    }

    Integer clear(1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) clear = integer_lcm(clear, denominator(form.gram()(i, j)));
    clear = integer_lcm(clear, denominator(b));
    std::vector<Integer> fm(n * n);
    Integer maxabs(0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            fm[i * n + j] = Integer(numerator(form.gram()(i, j)) * (clear / denominator(form.gram()(i, j))));
            Integer a = abs(fm[i * n + j]);
            if (a > maxabs) maxabs = a;
        }
    Integer target = numerator(b) * (clear / denominator(b));
    if (abs(target) > maxabs) maxabs = abs(target);

    for (Integer h(1); Rational(h) <= cutoff; ++h) {
        if (!h.fits_slong_p())
            throw std::invalid_argument("represent: cutoff beyond enumerable range");
        long long hh = h.get_si();
        // Word-sized arithmetic while |v'Fv| provably fits, exact bignums after.
        Integer worst = maxabs * h * h * Integer(static_cast<unsigned long>(n * n + 1));
        std::vector<long long> v;
        long long q = 0;
        bool hit = false;
        if (worst < Integer("4611686018427387904")) {
            std::vector<long long> fml(n * n);
            for (std::size_t k = 0; k < n * n; ++k) fml[k] = fm[k].get_si();
            detail::ShellScan<long long> scan(fml, target.get_si(), n, hh);
            hit = scan.scan(v, q);
        } else {
            detail::ShellScan<Integer> scan(fm, target, n, hh);
            hit = scan.scan(v, q);
        }
        if (hit) {
            RatVector t(n);
            for (std::size_t i = 0; i < n; ++i)
                t[i] = make_rational(Integer(static_cast<long>(v[i])),
                                     Integer(static_cast<long>(q)));
            return {SearchStatus::Found, t};
        }
    }
    return {certifying ? SearchStatus::CertifiedNone : SearchStatus::Inconclusive, {}};
}

struct EquivSearchOptions {
    Rational max_height = Rational(50);  // practical default cutoff per represent step
    bool use_masser = false;             // pay for the certified bound instead
};

struct EquivSearchResult {
    SearchStatus status;
    RatMatrix sigma;  // sigma' F sigma = G when status == Found
};

// Build sigma with sigma' F sigma = G column by column: diagonalize G, then
// represent each diagonal value by F restricted to the orthogonal
// complement of the columns found so far. Witt cancellation makes the
// greedy choice safe: if the forms are equivalent, every represent step
// must succeed, so a certified failure certifies non-equivalence.
inline EquivSearchResult rational_equiv_search(const QuadraticForm& f, const QuadraticForm& g,
                                               const EquivSearchOptions& options = {}) {
    const std::size_t n = f.dim();
    if (g.dim() != n) throw std::invalid_argument("rational_equiv_search: dimension mismatch");
    if (signature(f) != signature(g)) return {SearchStatus::CertifiedNone, {}};

    RatMatrix sigma_g = orthogonal_diagonalize(g);
    RatMatrix d = sigma_g.transpose() * g.gram() * sigma_g;

    RatMatrix basis = RatMatrix::identity(n);  // complement basis, shrinks by one column per step
    RatMatrix sigma_d(n, n);
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t m = n - step;
        QuadraticForm restricted(basis.transpose() * f.gram() * basis);
        Rational cutoff = options.use_masser
                              ? Rational(masser_height_cap(restricted, d(step, step)))
                              : options.max_height;
        RepresentResult r = represent(restricted, d(step, step), cutoff);
        if (r.status != SearchStatus::Found) return {r.status, {}};
        RatVector t = mat_vec(basis, r.vec);
        for (std::size_t i = 0; i < n; ++i) sigma_d(i, step) = t[i];
        if (m == 1) break;
        RatMatrix fb = f.gram() * basis;
        RatMatrix row(1, m);
        for (std::size_t j = 0; j < m; ++j) {
            Rational acc;
            for (std::size_t i = 0; i < n; ++i) acc += t[i] * fb(i, j);
            row(0, j) = acc;
        }
        basis = basis * kernel(row);
    }

    RatMatrix sigma = sigma_d * inverse(sigma_g);
    if (!(sigma.transpose() * f.gram() * sigma == g.gram()))
        throw std::logic_error("rational_equiv_search: assembled transform failed the exact check");
    return {SearchStatus::Found, sigma};
}

}  // namespace geneq
