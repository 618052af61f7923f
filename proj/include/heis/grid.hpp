#pragma once

// Uniform box grids and sampled functions on them.

#include <array>
#include <cstddef>
#include <vector>

#include "heis/linalg.hpp"

namespace heis {

class Grid3 {
 public:
  Grid3() = default;
  /// Throws std::invalid_argument unless every count is >= 3 and every spacing > 0.
  Grid3(Point lower, std::array<int, 3> counts, std::array<double, 3> spacing);
  /// counts[a] nodes spanning [lower_a, upper_a] inclusive.
  static Grid3 box(Point lower, Point upper, std::array<int, 3> counts);
  /// n^3 nodes on [lo, hi]^3.
  static Grid3 cube(double lo, double hi, int n) { return box({lo, lo, lo}, {hi, hi, hi}, {n, n, n}); }

  const Point& lower() const { return lower_; }
  Point upper() const;
  const std::array<int, 3>& counts() const { return n_; }
  const std::array<double, 3>& spacing() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]; }

  /// x3-fastest linear index.
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k; }
  std::array<int, 3> unravel(std::size_t idx) const;
  double coord(int axis, int i) const { return axis_lower(axis) + i * h_[axis]; }
  Point point(int i, int j, int k) const { return {coord(0, i), coord(1, j), coord(2, k)}; }
  Point point(std::size_t idx) const;
  /// Nearest node index along `axis` for coordinate v (clamped to the grid).
  int nearest(int axis, double v) const;
  bool on_boundary(int i, int j, int k) const;
  bool on_boundary(std::size_t idx) const;
  bool contains(const Point& p, double slack = 0.0) const;

  friend bool operator==(const Grid3&, const Grid3&) = default;

 private:
  double axis_lower(int axis) const { return axis == 0 ? lower_.x1 : axis == 1 ? lower_.x2 : lower_.x3; }

  Point lower_{};
  std::array<int, 3> n_{3, 3, 3};
  std::array<double, 3> h_{1.0, 1.0, 1.0};
};

/// Values of a function at the nodes of a Grid3, stored x3-fastest.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(Grid3 grid, double fill = 0.0);
  GridFunction(Grid3 grid, std::vector<double> values);

  const Grid3& grid() const { return grid_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& operator[](std::size_t idx) { return values_[idx]; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double& at(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }

  /// Trilinear interpolation; p must lie in the grid box (up to 1e-12 relative slack).
  double interpolate(const Point& p) const;
  /// Max |u - v| over all nodes; grids must match.
  double max_abs_diff(const GridFunction& other) const;
  bool all_finite() const;

 private:
  Grid3 grid_;
  std::vector<double> values_;
};

/// One node-interpolation weight: value index and coefficient.
struct InterpWeight {
  std::size_t index;
  double weight;
};

/// Trilinear weights of p on g (up to 8 entries; fewer when p lies on nodes or faces).
/// Fractions within 1e-12 of an integer are snapped so node-aligned samples are exact.
int interpolation_weights(const Grid3& g, const Point& p, std::array<InterpWeight, 8>& out);

}  // namespace heis
