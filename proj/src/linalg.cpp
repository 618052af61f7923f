#include "heis/linalg.hpp"

#include <numeric>

namespace heis {

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return r;
}

Mat3 multiply(const Sym3& a, const Sym3& b) { return multiply(a.full(), b.full()); }

double trace(const Mat3& m) { return m[0][0] + m[1][1] + m[2][2]; }

Sym3 congruence(const Sym3& s, const Sym3& a) {
  const Mat3 sa = multiply(s, a);
  const Mat3 sf = s.full();
  auto entry = [&](int i, int j) {
    return sa[i][0] * sf[0][j] + sa[i][1] * sf[1][j] + sa[i][2] * sf[2][j];
  };
  return {entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2), entry(2, 2)};
}

Sym3 square(const Sym3& a) {
  const Mat3 f = a.full();
  auto entry = [&](int i, int j) { return f[i][0] * f[0][j] + f[i][1] * f[1][j] + f[i][2] * f[2][j]; };
  return {entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2), entry(2, 2)};
}

Sym3 Mat2x3::gram() const {
  auto entry = [&](int i, int j) { return row0[i] * row0[j] + row1[i] * row1[j]; };
  return {entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2), entry(2, 2)};
}

std::array<double, 2> eigenvalues(const Sym2& a) {
  const double mean = 0.5 * (a.xx + a.yy);
  const double radius = std::hypot(0.5 * (a.xx - a.yy), a.xy);
  return {mean - radius, mean + radius};
}

void SymMatrix::set_block(std::size_t row, std::size_t col, const Sym3& b, double scale) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) (*this)(row + i, col + j) = scale * b(i, j);
}

double SymMatrix::max_abs_entry() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

EigenN jacobi_eigen(const SymMatrix& input, double tol) {
  const std::size_t n = input.size();
  std::vector<double> a(input.data().begin(), input.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double total = 0.0;
  for (double x : a) total += x * x;
  // tol bounds the eigenvalue error; the sweep continues to near round-off.
  const double threshold = (tol * 1e-3) * (tol * 1e-3) * total;

  for (int sweep = 0; sweep < 100 && total > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });
  EigenN out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = at(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors[j * n + k] = v[k * n + order[j]];
  }
  return out;
}

double min_eigenvalue(const SymMatrix& a) { return jacobi_eigen(a).values.front(); }

namespace {
SymMatrix to_dynamic(const Sym3& a) {
  SymMatrix m(3);
  m.set_block(0, 0, a);
  return m;
}
}  // namespace

Eigen3 eigen_decompose(const Sym3& a) {
  const EigenN e = jacobi_eigen(to_dynamic(a));
  Eigen3 out;
  for (int j = 0; j < 3; ++j) {
    out.values[j] = e.values[j];
    for (int k = 0; k < 3; ++k) out.vectors[k][j] = e.vectors[j * 3 + k];
  }
  return out;
}

std::array<double, 3> eigenvalues(const Sym3& a) { return eigen_decompose(a).values; }

double spectral_norm(const Sym3& a) {
  const auto e = eigenvalues(a);
  return std::max(std::abs(e[0]), std::abs(e[2]));
}

}  // namespace heis
