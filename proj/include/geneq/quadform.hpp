#pragma once

// Quadratic forms as symmetric Gram matrices over Q, with the two basic
// form-level computations everything else builds on: rational orthogonal
// diagonalization and the signature.

#include <cstddef>
#include <stdexcept>
#include <utility>

#include "matrix.hpp"
#include "rational.hpp"

namespace geneq {

class QuadraticForm {
public:
    explicit QuadraticForm(RatMatrix gram) : gram_(std::move(gram)) {
        if (!is_symmetric(gram_)) throw std::invalid_argument("QuadraticForm: gram not symmetric");
        det_ = determinant(gram_);
        if (det_ == 0) throw std::invalid_argument("QuadraticForm: form not regular");
    }

    const RatMatrix& gram() const { return gram_; }
    std::size_t dim() const { return gram_.rows(); }
    const Rational& det() const { return det_; }

    // Value of the form at a vector, v' * gram * v.
    Rational operator()(const RatVector& v) const {
        if (v.size() != dim()) throw std::invalid_argument("QuadraticForm: dimension mismatch");
        Rational acc;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (v[i] == 0) continue;
            for (std::size_t j = 0; j < dim(); ++j) acc += v[i] * gram_(i, j) * v[j];
        }
        return acc;
    }

private:
    RatMatrix gram_;
    Rational det_;
};

// Congruence transform to diagonal shape: returns S in GL_n(Q) with
// S' F S diagonal, every diagonal entry nonzero. Deterministic pivoting:
// the first unused basis vector with F(e_i) != 0, else e_i + e_j for the
// first off-diagonal nonzero (both diagonals being zero there, the sum is
// non-isotropic). Columns are scaled primitive at the end.
inline RatMatrix orthogonal_diagonalize(const QuadraticForm& form) {
    const std::size_t n = form.dim();
    RatMatrix s = form.gram();
    RatMatrix sigma = RatMatrix::identity(n);

    auto add_column = [&](std::size_t i, std::size_t k, const Rational& c) {
        for (std::size_t r = 0; r < n; ++r) sigma(r, i) += c * sigma(r, k);
        for (std::size_t r = 0; r < n; ++r) s(r, i) += c * s(r, k);
        for (std::size_t r = 0; r < n; ++r) s(i, r) += c * s(k, r);
    };
    auto swap_columns = [&](std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t r = 0; r < n; ++r) std::swap(sigma(r, i), sigma(r, k));
        for (std::size_t r = 0; r < n; ++r) std::swap(s(r, i), s(r, k));
        for (std::size_t r = 0; r < n; ++r) std::swap(s(i, r), s(k, r));
    };

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n && piv == n; ++i)
            if (s(i, i) != 0) piv = i;
        if (piv == n) {
            std::size_t oi = n, oj = n;
            for (std::size_t i = k; i < n && oi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (s(i, j) != 0) { oi = i; oj = j; break; }
            if (oi == n) throw std::logic_error("orthogonal_diagonalize: degenerate block");
            add_column(oi, oj, Rational(1));
            piv = oi;
        }
        swap_columns(k, piv);
        for (std::size_t j = k + 1; j < n; ++j) {
            if (s(k, j) == 0) continue;
            add_column(j, k, -s(k, j) / s(k, k));
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        RatVector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = sigma(i, j);
        col = primitive_scale(col);
        for (std::size_t i = 0; i < n; ++i) sigma(i, j) = col[i];
    }
    return sigma;
}

// Inertia counts (positives, negatives) of the diagonalized form.
inline std::pair<std::size_t, std::size_t> signature(const QuadraticForm& form) {
    RatMatrix sigma = orthogonal_diagonalize(form);
    RatMatrix d = sigma.transpose() * form.gram() * sigma;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < form.dim(); ++i) {
        if (d(i, i) > 0) ++pos;
        else ++neg;
    }
    return {pos, neg};
}

}  // namespace geneq
