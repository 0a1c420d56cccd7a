#pragma once

// Dense matrices over an exact ring, plus the linear algebra the rest of
// the library needs over the rationals: determinant, inverse, kernel.
// Dimensions stay desk-scale (n <= 5 or so); plain Gaussian elimination
// with exact arithmetic is the right tool.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace geneq {

template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: data size mismatch");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = s * a.data_[k];
        return r;
    }

    Matrix operator-() const { return T(-1) * (*this); }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using IntMatrix = Matrix<Integer>;
using RatVector = std::vector<Rational>;

inline RatVector mat_vec(const RatMatrix& a, const RatVector& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    RatVector r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
    return r;
}

inline bool is_symmetric(const RatMatrix& a) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != a(j, i)) return false;
    return true;
}

inline bool is_skew_symmetric(const RatMatrix& a) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (a(i, j) != -a(j, i)) return false;
    return true;
}

inline Rational determinant(RatMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: not square");
    const std::size_t n = a.rows();
    Rational det(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && a(pivot, k) == 0) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(pivot, j), a(k, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rational m = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    return det;
}

inline RatMatrix inverse(RatMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
    const std::size_t n = a.rows();
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && a(pivot, k) == 0) ++pivot;
        if (pivot == n) throw std::domain_error("inverse: singular matrix");
        if (pivot != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(k, j));
                std::swap(inv(pivot, j), inv(k, j));
            }
        Rational d = a(k, k);
        for (std::size_t j = 0; j < n; ++j) { a(k, j) /= d; inv(k, j) /= d; }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rational m = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= m * a(k, j);
                inv(i, j) -= m * inv(k, j);
            }
        }
    }
    return inv;
}

// Canonical kernel basis of a (possibly non-square) matrix: reduced row
// echelon form, each free column contributing one basis vector with a 1 in
// the free position. Columns of the result span ker(a).
inline RatMatrix kernel(RatMatrix a) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t pivot = row;
        while (pivot < m && a(pivot, col) == 0) ++pivot;
        if (pivot == m) continue;
        if (pivot != row)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(row, j));
        Rational d = a(row, col);
        for (std::size_t j = 0; j < n; ++j) a(row, j) /= d;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || a(i, col) == 0) continue;
            Rational f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::size_t dim = n - pivot_col.size();
    RatMatrix basis(n, dim);
    std::size_t b = 0;
    for (std::size_t col = 0; col < n; ++col) {
        if (is_pivot[col]) continue;
        basis(col, b) = Rational(1);
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            basis(pivot_col[r], b) = -a(r, col);
        ++b;
    }
    return basis;
}

// Scale a rational vector to a primitive integer vector (content 1),
// preserving direction. Zero vectors pass through unchanged.
inline RatVector primitive_scale(const RatVector& v) {
    Integer l(1), g(0);
    for (const Rational& x : v) l = integer_lcm(l, denominator(x));
    for (const Rational& x : v) g = integer_gcd(g, Integer(numerator(x) * (l / denominator(x))));
    if (g == 0) return v;
    RatVector r(v.size());
    Rational s = make_rational(l, g);
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
    return r;
}

}  // namespace geneq
