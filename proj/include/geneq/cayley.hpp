#pragma once

// The Cayley correspondence between skew-symmetric matrices and
// Q-orthogonal transformations, in both directions and exactly. For skew U
// with det(U+Q) != 0, mu = (U+Q)^{-1}(U-Q) satisfies mu' Q mu = Q and
// det(I - mu) != 0; the inverse map is U = 2Q(I-mu)^{-1} - Q.

#include <stdexcept>

#include "matrix.hpp"
#include "quadform.hpp"

namespace geneq {

inline RatMatrix cayley(const RatMatrix& u, const QuadraticForm& q) {
    const std::size_t n = q.dim();
    if (u.rows() != n || u.cols() != n) throw std::invalid_argument("cayley: shape mismatch");
    if (!is_skew_symmetric(u)) throw std::invalid_argument("cayley: U not skew-symmetric");
    RatMatrix upq = u + q.gram();
    if (determinant(upq) == 0) throw std::domain_error("cayley: det(U+Q) = 0");
    return inverse(upq) * (u - q.gram());
}

inline RatMatrix cayley_inverse(const RatMatrix& mu, const QuadraticForm& q) {
    const std::size_t n = q.dim();
    if (mu.rows() != n || mu.cols() != n)
        throw std::invalid_argument("cayley_inverse: shape mismatch");
    if (!(mu.transpose() * q.gram() * mu == q.gram()))
        throw std::invalid_argument("cayley_inverse: mu does not preserve Q");
    RatMatrix imu = RatMatrix::identity(n) - mu;
    if (determinant(imu) == 0) throw std::domain_error("cayley_inverse: det(I - mu) = 0");
    RatMatrix u = Rational(2) * (q.gram() * inverse(imu)) - q.gram();
    if (!is_skew_symmetric(u))
        throw std::logic_error("cayley_inverse: result not skew despite orthogonal input");
    return u;
}

}  // namespace geneq
