#include "heis/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis {

Grid3::Grid3(Point lower, std::array<int, 3> counts, std::array<double, 3> spacing)
    : lower_(lower), n_(counts), h_(spacing) {
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 3) throw std::invalid_argument("Grid3: every axis needs at least 3 nodes");
    if (!(h_[a] > 0.0) || !std::isfinite(h_[a])) throw std::invalid_argument("Grid3: spacings must be positive");
  }
  if (!std::isfinite(lower.x1) || !std::isfinite(lower.x2) || !std::isfinite(lower.x3))
    throw std::invalid_argument("Grid3: lower corner must be finite");
}

Grid3 Grid3::box(Point lower, Point upper, std::array<int, 3> counts) {
  const std::array<double, 3> lo{lower.x1, lower.x2, lower.x3};
  const std::array<double, 3> hi{upper.x1, upper.x2, upper.x3};
  std::array<double, 3> h{};
  for (int a = 0; a < 3; ++a) {
    if (counts[a] < 3) throw std::invalid_argument("Grid3: every axis needs at least 3 nodes");
    if (!(hi[a] > lo[a])) throw std::invalid_argument("Grid3: upper corner must exceed lower corner");
    h[a] = (hi[a] - lo[a]) / (counts[a] - 1);
  }
  return Grid3(lower, counts, h);
}

Point Grid3::upper() const { return point(n_[0] - 1, n_[1] - 1, n_[2] - 1); }

std::array<int, 3> Grid3::unravel(std::size_t idx) const {
  const int k = static_cast<int>(idx % n_[2]);
  idx /= n_[2];
  const int j = static_cast<int>(idx % n_[1]);
  const int i = static_cast<int>(idx / n_[1]);
  return {i, j, k};
}

Point Grid3::point(std::size_t idx) const {
  const auto [i, j, k] = unravel(idx);
  return point(i, j, k);
}

int Grid3::nearest(int axis, double v) const {
  const double t = std::round((v - axis_lower(axis)) / h_[axis]);
  return static_cast<int>(std::clamp(t, 0.0, static_cast<double>(n_[axis] - 1)));
}

bool Grid3::on_boundary(int i, int j, int k) const {
  return i == 0 || j == 0 || k == 0 || i == n_[0] - 1 || j == n_[1] - 1 || k == n_[2] - 1;
}

bool Grid3::on_boundary(std::size_t idx) const {
  const auto [i, j, k] = unravel(idx);
  return on_boundary(i, j, k);
}

bool Grid3::contains(const Point& p, double slack) const {
  const std::array<double, 3> v{p.x1, p.x2, p.x3};
  for (int a = 0; a < 3; ++a) {
    const double t = (v[a] - axis_lower(a)) / h_[a];
    if (!(t >= -slack && t <= (n_[a] - 1) + slack)) return false;
  }
  return true;
}

GridFunction::GridFunction(Grid3 grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

GridFunction::GridFunction(Grid3 grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("GridFunction: value count does not match grid");
}

int interpolation_weights(const Grid3& g, const Point& p, std::array<InterpWeight, 8>& out) {
  constexpr double kSnap = 1e-12;
  const std::array<double, 3> v{p.x1, p.x2, p.x3};
  std::array<int, 3> base{};
  std::array<double, 3> frac{};
  for (int a = 0; a < 3; ++a) {
    const int n = g.counts()[a];
    double t = (v[a] - g.coord(a, 0)) / g.spacing()[a];
    if (t < -kSnap * n || t > (n - 1) * (1.0 + kSnap) + kSnap)
      throw std::out_of_range("interpolation point outside the grid box");
    t = std::clamp(t, 0.0, static_cast<double>(n - 1));
    double cell = std::floor(t);
    double f = t - cell;
    if (f < kSnap) {
      f = 0.0;
    } else if (f > 1.0 - kSnap) {
      f = 0.0;
      cell += 1.0;
    }
    int c = static_cast<int>(cell);
    if (c >= n - 1) {  // on the upper face
      c = n - 1;
      f = 0.0;
    }
    base[a] = c;
    frac[a] = f;
  }
  int m = 0;
  for (int di = 0; di < 2; ++di) {
    const double wi = di ? frac[0] : 1.0 - frac[0];
    if (wi == 0.0) continue;
    for (int dj = 0; dj < 2; ++dj) {
      const double wj = dj ? frac[1] : 1.0 - frac[1];
      if (wj == 0.0) continue;
      for (int dk = 0; dk < 2; ++dk) {
        const double wk = dk ? frac[2] : 1.0 - frac[2];
        if (wk == 0.0) continue;
        out[m++] = {g.index(base[0] + di, base[1] + dj, base[2] + dk), wi * wj * wk};
      }
    }
  }
  return m;
}

double GridFunction::interpolate(const Point& p) const {
  std::array<InterpWeight, 8> w;
  const int m = interpolation_weights(grid_, p, w);
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += w[i].weight * values_[w[i].index];
  return s;
}

double GridFunction::max_abs_diff(const GridFunction& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("max_abs_diff: grids differ");
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i] - other.values_[i]));
  return m;
}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace heis
