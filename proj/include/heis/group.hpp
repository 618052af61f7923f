#pragma once

// The first Heisenberg group H^1 = (R^3, ·) with
//   x · y = (x1 + y1, x2 + y2, x3 + y3 + 2 (y1 x2 - y2 x1)),
// the horizontal frame X = ∂1 + 2 x2 ∂3, Y = ∂2 - 2 x1 ∂3, T = ∂3 ([X,Y] = -4T),
// and the coefficient matrices sigma, P = sigma^T sigma and sqrt(P).

#include "heis/linalg.hpp"

namespace heis {

Point group_mul(const Point& p, const Point& q);
Point group_inv(const Point& p);

/// Homogeneous dilation (lam x1, lam x2, lam^2 x3). Throws std::invalid_argument if lam <= 0.
Point dilate(double lam, const Point& p);

struct Frame {
  Vec3 X;
  Vec3 Y;
  Vec3 T;
};

Frame frame(const Point& p);
inline Vec3 field_x(const Point& p) { return {1.0, 0.0, 2.0 * p.x2}; }
inline Vec3 field_y(const Point& p) { return {0.0, 1.0, -2.0 * p.x1}; }

Mat2x3 sigma(const Point& p);

/// P(x) = sigma(x)^T sigma(x); positive semidefinite with kernel spanned by (-2 x2, 2 x1, 1).
Sym3 p_matrix(const Point& p);

/// Generator of the kernel of P(x).
inline Vec3 p_kernel(const Point& p) { return {-2.0 * p.x2, 2.0 * p.x1, 1.0}; }

/// Symmetric positive semidefinite square root of P(x), closed form without the
/// removable singularity at x' = 0. Depends only on x'.
Sym3 sqrt_p(const Point& p);

}  // namespace heis
