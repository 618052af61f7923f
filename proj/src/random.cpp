#include "heis/random.hpp"

namespace heis {

Point random_point(SplitMix64& rng, double lo, double hi) {
  const double a = rng.uniform(lo, hi);
  const double b = rng.uniform(lo, hi);
  const double c = rng.uniform(lo, hi);
  return {a, b, c};
}

Vec3 random_unit_vector(SplitMix64& rng) {
  for (;;) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    const Vec3 v{a, b, c};
    const double n = norm(v);
    if (n > 1e-8) return (1.0 / n) * v;
  }
}

Sym2 random_sym2(SplitMix64& rng, double scale) {
  const double a = rng.uniform(-scale, scale);
  const double b = rng.uniform(-scale, scale);
  const double c = rng.uniform(-scale, scale);
  return {a, b, c};
}

Sym3 random_sym3(SplitMix64& rng, double scale) {
  Sym3 s;
  s.a11 = rng.uniform(-scale, scale);
  s.a12 = rng.uniform(-scale, scale);
  s.a13 = rng.uniform(-scale, scale);
  s.a22 = rng.uniform(-scale, scale);
  s.a23 = rng.uniform(-scale, scale);
  s.a33 = rng.uniform(-scale, scale);
  return s;
}

Sym2 rotated_diag2(double angle, double a, double b) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {a * c * c + b * s * s, (a - b) * c * s, a * s * s + b * c * c};
}

Mat3 random_rotation3(SplitMix64& rng) {
  double w, x, y, z, n;
  do {
    w = rng.normal();
    x = rng.normal();
    y = rng.normal();
    z = rng.normal();
    n = std::sqrt(w * w + x * x + y * y + z * z);
  } while (n < 1e-8);
  w /= n; x /= n; y /= n; z /= n;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

Sym3 rotated_diag3(const Mat3& q, const Vec3& d) {
  auto entry = [&](int i, int j) { return q[0][i] * d[0] * q[0][j] + q[1][i] * d[1] * q[1][j] + q[2][i] * d[2] * q[2][j]; };
  return {entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2), entry(2, 2)};
}

Sym2 random_psd2(SplitMix64& rng, double lo, double hi) {
  const double angle = rng.uniform(0.0, 3.141592653589793);
  const double a = rng.log_uniform(lo, hi);
  const double b = rng.log_uniform(lo, hi);
  return rotated_diag2(angle, a, b);
}

Sym3 random_psd3(SplitMix64& rng, double lo, double hi) {
  const Mat3 q = random_rotation3(rng);
  const double a = rng.log_uniform(lo, hi);
  const double b = rng.log_uniform(lo, hi);
  const double c = rng.log_uniform(lo, hi);
  return rotated_diag3(q, {a, b, c});
}

}  // namespace heis
