#pragma once

// Small fixed-size dense types used throughout the library: points of the
// Heisenberg group, 2- and 3-vectors, symmetric 2x2 / 3x3 matrices stored as
// upper triangles, and a dynamic symmetric matrix for the 6x6 block checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace heis {

/// A point of H^1 identified with R^3. x' denotes the horizontal pair (x1, x2).
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 to_vec(const Point& p) { return {p.x1, p.x2, p.x3}; }
inline Point to_point(const Vec3& v) { return {v[0], v[1], v[2]}; }

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Euclidean distance |x - y| in R^3.
inline double distance(const Point& x, const Point& y) { return norm(to_vec(x) - to_vec(y)); }
inline double norm(const Point& x) { return norm(to_vec(x)); }
/// |x' - y'|, the distance between horizontal projections.
inline double horizontal_distance(const Point& x, const Point& y) {
  return std::hypot(x.x1 - y.x1, x.x2 - y.x2);
}

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 diag(double a, double b) { return {a, 0.0, b}; }

  double trace() const { return xx + yy; }
  double operator()(int i, int j) const {
    if (i == 0 && j == 0) return xx;
    if (i == 1 && j == 1) return yy;
    return xy;
  }
  Vec2 apply(const Vec2& v) const { return {xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]}; }
  double quad(const Vec2& v) const { return xx * v[0] * v[0] + 2.0 * xy * v[0] * v[1] + yy * v[1] * v[1]; }
  double max_abs_entry() const { return std::max({std::abs(xx), std::abs(xy), std::abs(yy)}); }

  Sym2& operator+=(const Sym2& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }
  Sym2& operator-=(const Sym2& o) { xx -= o.xx; xy -= o.xy; yy -= o.yy; return *this; }
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend Sym2 operator-(const Sym2& a) { return {-a.xx, -a.xy, -a.yy}; }
  friend Sym2 operator*(double s, const Sym2& a) { return {s * a.xx, s * a.xy, s * a.yy}; }
  friend bool operator==(const Sym2&, const Sym2&) = default;
};

/// Symmetric 3x3 matrix; only the upper triangle is stored.
struct Sym3 {
  double a11 = 0.0, a12 = 0.0, a13 = 0.0;
  double a22 = 0.0, a23 = 0.0;
  double a33 = 0.0;

  static Sym3 identity() { return {1.0, 0.0, 0.0, 1.0, 0.0, 1.0}; }
  static Sym3 diag(double a, double b, double c) { return {a, 0.0, 0.0, b, 0.0, c}; }
  /// s * (v ⊗ v)
  static Sym3 outer(const Vec3& v, double s = 1.0) {
    return {s * v[0] * v[0], s * v[0] * v[1], s * v[0] * v[2],
            s * v[1] * v[1], s * v[1] * v[2], s * v[2] * v[2]};
  }
  /// Symmetric part of a general matrix.
  static Sym3 symmetric_part(const Mat3& m) {
    return {m[0][0], 0.5 * (m[0][1] + m[1][0]), 0.5 * (m[0][2] + m[2][0]),
            m[1][1], 0.5 * (m[1][2] + m[2][1]), m[2][2]};
  }

  double operator()(int i, int j) const {
    if (i > j) std::swap(i, j);
    switch (i * 3 + j) {
      case 0: return a11;
      case 1: return a12;
      case 2: return a13;
      case 4: return a22;
      case 5: return a23;
      default: return a33;
    }
  }
  double trace() const { return a11 + a22 + a33; }
  Mat3 full() const { return {{{a11, a12, a13}, {a12, a22, a23}, {a13, a23, a33}}}; }
  Vec3 apply(const Vec3& v) const {
    return {a11 * v[0] + a12 * v[1] + a13 * v[2],
            a12 * v[0] + a22 * v[1] + a23 * v[2],
            a13 * v[0] + a23 * v[1] + a33 * v[2]};
  }
  /// <A v, w>
  double bilinear(const Vec3& v, const Vec3& w) const { return dot(apply(v), w); }
  double quad(const Vec3& v) const { return bilinear(v, v); }
  double max_abs_entry() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a13), std::abs(a22), std::abs(a23),
                     std::abs(a33)});
  }
  double frobenius() const {
    return std::sqrt(a11 * a11 + a22 * a22 + a33 * a33 + 2.0 * (a12 * a12 + a13 * a13 + a23 * a23));
  }

  Sym3& operator+=(const Sym3& o) {
    a11 += o.a11; a12 += o.a12; a13 += o.a13; a22 += o.a22; a23 += o.a23; a33 += o.a33;
    return *this;
  }
  Sym3& operator-=(const Sym3& o) {
    a11 -= o.a11; a12 -= o.a12; a13 -= o.a13; a22 -= o.a22; a23 -= o.a23; a33 -= o.a33;
    return *this;
  }
  friend Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
  friend Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }
  friend Sym3 operator-(const Sym3& a) { return -1.0 * a; }
  friend Sym3 operator*(double s, const Sym3& a) {
    return {s * a.a11, s * a.a12, s * a.a13, s * a.a22, s * a.a23, s * a.a33};
  }
  friend bool operator==(const Sym3&, const Sym3&) = default;
};

/// Product of two symmetric matrices (not symmetric in general).
Mat3 multiply(const Sym3& a, const Sym3& b);
Mat3 multiply(const Mat3& a, const Mat3& b);
double trace(const Mat3& m);
/// S^T A S for a symmetric S, returned as a symmetric matrix (upper triangle computed).
Sym3 congruence(const Sym3& s, const Sym3& a);
/// A*A for symmetric A.
Sym3 square(const Sym3& a);

/// 2x3 matrix, rows are the horizontal vector fields.
struct Mat2x3 {
  Vec3 row0{};
  Vec3 row1{};

  /// this^T * this
  Sym3 gram() const;
};

/// Eigenvalues of a symmetric 2x2 matrix in ascending order (closed form).
std::array<double, 2> eigenvalues(const Sym2& a);

struct Eigen3 {
  std::array<double, 3> values{};  // ascending
  Mat3 vectors{};                  // column j is the eigenvector of values[j]
};

/// Eigenvalues of a symmetric 3x3 matrix in ascending order (cyclic Jacobi).
std::array<double, 3> eigenvalues(const Sym3& a);
Eigen3 eigen_decompose(const Sym3& a);
/// Largest absolute eigenvalue.
double spectral_norm(const Sym3& a);

/// Dense symmetric n x n matrix, row-major, used for the 6x6 block matrices.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  /// Sets entry (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  void set_block(std::size_t row, std::size_t col, const Sym3& b, double scale = 1.0);
  double max_abs_entry() const;
  std::span<const double> data() const { return data_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct EigenN {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major n x n, column j pairs with values[j]
};

/// Cyclic Jacobi eigen-decomposition, off-diagonal mass driven below tol * |A|.
EigenN jacobi_eigen(const SymMatrix& a, double tol = 1e-12);
double min_eigenvalue(const SymMatrix& a);

}  // namespace heis
