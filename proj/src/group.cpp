#include "heis/group.hpp"

#include <stdexcept>

namespace heis {

Point group_mul(const Point& p, const Point& q) {
  return {p.x1 + q.x1, p.x2 + q.x2, p.x3 + q.x3 + 2.0 * (q.x1 * p.x2 - q.x2 * p.x1)};
}

Point group_inv(const Point& p) { return {-p.x1, -p.x2, -p.x3}; }

Point dilate(double lam, const Point& p) {
  if (!(lam > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
  return {lam * p.x1, lam * p.x2, lam * lam * p.x3};
}

Frame frame(const Point& p) { return {field_x(p), field_y(p), {0.0, 0.0, 1.0}}; }

Mat2x3 sigma(const Point& p) { return {field_x(p), field_y(p)}; }

Sym3 p_matrix(const Point& p) {
  const double a = 2.0 * p.x2;
  const double b = -2.0 * p.x1;
  return {1.0, 0.0, a, 1.0, b, 4.0 * (p.x1 * p.x1 + p.x2 * p.x2)};
}

Sym3 sqrt_p(const Point& p) {
  const double r2 = p.x1 * p.x1 + p.x2 * p.x2;
  const double s = std::sqrt(1.0 + 4.0 * r2);
  const double d = (1.0 + s) * s;
  // The x2^2 correction sits in the (1,1) slot: sqrt(P) = u u^T + w w^T / (4 |x'|^2 s)
  // with u = (x1, x2, 0)/|x'| and w = (2 x2, -2 x1, 4 |x'|^2).
  return {1.0 - 4.0 * p.x2 * p.x2 / d, 4.0 * p.x1 * p.x2 / d, 2.0 * p.x2 / s,
          1.0 - 4.0 * p.x1 * p.x1 / d, -2.0 * p.x1 / s,
          4.0 * r2 / s};
}

}  // namespace heis
