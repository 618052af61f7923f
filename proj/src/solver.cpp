#include "heis/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace heis {

namespace {

bool is_spectral(const OperatorSpec& op) {
  return op.kind() == OperatorKind::SubLaplacian || op.kind() == OperatorKind::PucciPlus ||
         op.kind() == OperatorKind::PucciMinus;
}

double stencil_step(const Grid3& g) { return std::min(g.spacing()[0], g.spacing()[1]); }

// Calls emit(component, q, weight) for every sample of the frame-aligned stencil
// at p; component 0 = X²u, 1 = Y²u, 2 = symmetrized XYu.
template <typename Emit>
void frame_samples(const Point& p, double h, Emit&& emit) {
  const Vec3 c = to_vec(p);
  const Vec3 hx = h * field_x(p);
  const Vec3 hy = h * field_y(p);
  const double w2 = 1.0 / (h * h);
  const double w4 = 0.25 * w2;
  emit(0, to_point(c + hx), w2);
  emit(0, p, -2.0 * w2);
  emit(0, to_point(c - hx), w2);
  emit(1, to_point(c + hy), w2);
  emit(1, p, -2.0 * w2);
  emit(1, to_point(c - hy), w2);
  emit(2, to_point(c + hx + hy), w4);
  emit(2, to_point(c + hx - hy), -w4);
  emit(2, to_point(c - hx + hy), -w4);
  emit(2, to_point(c - hx - hy), w4);
}

constexpr double kBoxSlack = 1e-9;

Point clamp_to_box(const Grid3& g, const Point& q) {
  const Point lo = g.lower(), hi = g.upper();
  return {std::clamp(q.x1, lo.x1, hi.x1), std::clamp(q.x2, lo.x2, hi.x2), std::clamp(q.x3, lo.x3, hi.x3)};
}

void check_interior(const Grid3& g, std::size_t idx) {
  if (idx >= g.size()) throw std::invalid_argument("node index out of range");
  if (g.on_boundary(idx)) throw std::invalid_argument("stencil requested at boundary node " + std::to_string(idx));
}

}  // namespace

void ProblemSpec::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("problem: tol must be positive");
  if (max_iters == 0) throw std::invalid_argument("problem: max_iters must be positive");
  if (op.form() == OperatorForm::Lifted && !is_spectral(op))
    throw std::invalid_argument("problem: the grid scheme evaluates lifted operators only for spectral kinds");
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double cv = c(grid.point(idx));
    if (!(cv >= 0.0)) throw std::invalid_argument("problem: c must be nonnegative on the grid (node " + std::to_string(idx) + ")");
  }
}

GridFunction boundary_values(const ProblemSpec& prob) {
  GridFunction u(prob.grid);
  for (std::size_t idx = 0; idx < prob.grid.size(); ++idx) u[idx] = prob.boundary(prob.grid.point(idx));
  return u;
}

Sym2 stencil_hessian(const GridFunction& u, std::size_t idx, const ScalarField* boundary) {
  const Grid3& g = u.grid();
  check_interior(g, idx);
  double comp[3] = {0.0, 0.0, 0.0};
  frame_samples(g.point(idx), stencil_step(g), [&](int which, const Point& q, double w) {
    double v;
    if (g.contains(q, kBoxSlack)) v = u.interpolate(q);
    else if (boundary) v = (*boundary)(q);
    else v = u.interpolate(clamp_to_box(g, q));
    comp[which] += w * v;
  });
  return {comp[0], comp[2], comp[1]};
}

Discretization::Discretization(const ProblemSpec& prob) : prob_(&prob) {
  prob.validate();
  const Grid3& g = prob.grid;
  if (g.size() > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("grid too large");
  const OperatorSpec& op = prob.op;
  if (op.kind() == OperatorKind::SubLaplacian) {
    linear_ = true;
    linear_coeff_ = Sym2::identity();
  } else if (op.kind() == OperatorKind::TraceLinear && op.form() == OperatorForm::Intrinsic) {
    linear_ = true;
    linear_coeff_ = op.coefficient2();
  }
  const double h = stencil_step(g);
  const double hmin = std::min({g.spacing()[0], g.spacing()[1], g.spacing()[2]});

  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (!g.on_boundary(idx)) interior_.push_back(idx);
  rows_.reserve(interior_.size() * (linear_ ? 1 : 3));
  cols_.reserve(interior_.size() * (linear_ ? 13 : 18));
  weights_.reserve(cols_.capacity());
  c_.resize(interior_.size());
  f_.resize(interior_.size());

  std::vector<std::pair<std::uint32_t, double>> entries[3];
  double constants[3];
  std::array<InterpWeight, 8> iw;
  auto flush = [&](std::vector<std::pair<std::uint32_t, double>>& e, double constant) {
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Row row;
    row.begin = static_cast<std::uint32_t>(cols_.size());
    for (std::size_t i = 0; i < e.size();) {
      std::size_t j = i;
      double w = 0.0;
      for (; j < e.size() && e[j].first == e[i].first; ++j) w += e[j].second;
      if (w != 0.0) {
        cols_.push_back(e[i].first);
        weights_.push_back(w);
      }
      i = j;
    }
    row.end = static_cast<std::uint32_t>(cols_.size());
    row.constant = constant;
    rows_.push_back(row);
  };

  for (std::size_t n = 0; n < interior_.size(); ++n) {
    const Point p = g.point(interior_[n]);
    c_[n] = prob.c(p);
    f_[n] = prob.f(p);
    c_max_ = std::max(c_max_, c_[n]);
    for (int k = 0; k < 3; ++k) {
      entries[k].clear();
      constants[k] = 0.0;
    }
    frame_samples(p, h, [&](int which, const Point& q, double w) {
      if (g.contains(q, kBoxSlack)) {
        const int m = interpolation_weights(g, q, iw);
        for (int i = 0; i < m; ++i) entries[which].emplace_back(static_cast<std::uint32_t>(iw[i].index), w * iw[i].weight);
      } else {
        constants[which] += w * prob.boundary(q);
      }
    });
    if (linear_) {
      // a11 X²u + 2 a12 XYu + a22 Y²u as one row.
      const double scale[3] = {linear_coeff_.xx, linear_coeff_.yy, 2.0 * linear_coeff_.xy};
      std::vector<std::pair<std::uint32_t, double>> merged;
      double constant = 0.0;
      for (int k = 0; k < 3; ++k) {
        if (scale[k] == 0.0) continue;
        for (const auto& [col, w] : entries[k]) merged.emplace_back(col, scale[k] * w);
        constant += scale[k] * constants[k];
      }
      flush(merged, constant);
    } else {
      for (int k = 0; k < 3; ++k) flush(entries[k], constants[k]);
    }
  }
  for (std::size_t idx = 0; idx < g.size(); ++idx) c_max_ = std::max(c_max_, prob.c(g.point(idx)));
  tau_ = 0.4 * hmin * hmin / (op.bracket().Lam * (4.0 + c_max_ * hmin * hmin));
}

double Discretization::row_value(const Row& row, const std::vector<double>& u) const {
  const std::uint32_t* col = cols_.data();
  const double* w = weights_.data();
  double s = row.constant;
  for (std::uint32_t i = row.begin; i < row.end; ++i) s += w[i] * u[col[i]];
  return s;
}

Sym2 Discretization::hessian(const std::vector<double>& u, std::size_t n) const {
  if (linear_) throw std::logic_error("Discretization::hessian: rows are merged for linear operators");
  const Row* r = &rows_[3 * n];
  return {row_value(r[0], u), row_value(r[2], u), row_value(r[1], u)};
}

double Discretization::residual(const std::vector<double>& u, std::vector<double>& r) const {
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(interior_.size());
  r.resize(interior_.size());
  double worst = 0.0;
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(max : worst) reduction(|| : bad)
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    const double un = u[interior_[n]];
    const double fv = linear_ ? row_value(rows_[n], u) : prob_->op.apply(hessian(u, static_cast<std::size_t>(n)));
    const double v = fv - c_[n] * un - f_[n];
    r[n] = v;
    if (!std::isfinite(v)) bad = true;
    else worst = std::max(worst, std::abs(v));
  }
  if (bad) {
    for (std::size_t n = 0; n < interior_.size(); ++n)
      if (!std::isfinite(r[n]))
        throw std::domain_error("solver: non-finite residual at node " + std::to_string(interior_[n]));
  }
  return worst;
}

GridFunction step(const GridFunction& u, const ProblemSpec& prob, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("step: tau must be positive");
  if (!(u.grid() == prob.grid)) throw std::invalid_argument("step: grid does not match the problem");
  const Discretization d(prob);
  std::vector<double> r;
  d.residual(u.values(), r);
  GridFunction v = u;
  const auto& interior = d.interior();
  for (std::size_t n = 0; n < interior.size(); ++n) v[interior[n]] += tau * r[n];
  for (std::size_t idx = 0; idx < prob.grid.size(); ++idx)
    if (prob.grid.on_boundary(idx)) v[idx] = prob.boundary(prob.grid.point(idx));
  if (!v.all_finite()) throw std::domain_error("step: non-finite value produced");
  return v;
}

double residual_norm(const GridFunction& u, const ProblemSpec& prob) {
  if (!(u.grid() == prob.grid)) throw std::invalid_argument("residual_norm: grid does not match the problem");
  const Discretization d(prob);
  std::vector<double> r;
  return d.residual(u.values(), r);
}

SolveResult solve(const ProblemSpec& prob, const SolveOptions& opts) {
  const Discretization d(prob);
  const Grid3& g = prob.grid;
  GridFunction start = boundary_values(prob);
  if (opts.initial && !(opts.initial->grid() == g)) throw std::invalid_argument("solve: initial iterate grid does not match");
  for (std::size_t n : d.interior()) start[n] = opts.initial ? (*opts.initial)[n] : 0.0;
  const auto& interior = d.interior();
  const double tau = d.tau();
  std::vector<double> x = start.values();
  std::vector<double> r;

  SolveResult out;
  out.tau = tau;
  if (opts.acceleration == Acceleration::None) {
    for (;;) {
      const double res = d.residual(x, r);
      if (opts.record_history) out.history.push_back(res);
      out.residual = res;
      if (res < prob.tol) {
        out.converged = true;
        break;
      }
      if (out.iterations == prob.max_iters) break;
      for (std::size_t n = 0; n < interior.size(); ++n) x[interior[n]] += tau * r[n];
      ++out.iterations;
    }
    out.u = GridFunction(g, std::move(x));
    return out;
  }

  std::vector<double> prev = x, y = x, next = x;
  std::size_t k = 0;
  for (;;) {
    const double beta = static_cast<double>(k) / (static_cast<double>(k) + 3.0);
    for (std::size_t idx : interior) y[idx] = x[idx] + beta * (x[idx] - prev[idx]);
    const double res = d.residual(y, r);
    if (opts.record_history) out.history.push_back(res);
    if (res < prob.tol) {
      out.residual = res;
      out.converged = true;
      x.swap(y);
      break;
    }
    if (out.iterations == prob.max_iters) {
      out.residual = d.residual(x, r);
      break;
    }
    double along = 0.0;
    for (std::size_t n = 0; n < interior.size(); ++n) {
      const std::size_t idx = interior[n];
      next[idx] = y[idx] + tau * r[n];
      along += r[n] * (next[idx] - x[idx]);
    }
    k = along < 0.0 ? 0 : k + 1;
    prev.swap(x);
    x.swap(next);
    ++out.iterations;
  }
  out.u = GridFunction(g, std::move(x));
  return out;
}

ScalarField manufacture(const ScalarField& u_star, const OperatorSpec& op, const ScalarField& c) {
  const Polynomial* u = u_star.polynomial_form();
  if (!u) throw std::invalid_argument("manufacture: u* must be a polynomial field");
  const Polynomial* cp = c.polynomial_form();
  const bool linear_trace = op.kind() == OperatorKind::SubLaplacian ||
                            (op.kind() == OperatorKind::TraceLinear && op.form() == OperatorForm::Intrinsic);
  if (linear_trace && cp) {
    const Sym2 a = op.kind() == OperatorKind::SubLaplacian ? Sym2::identity() : op.coefficient2();
    const Polynomial xu = u->apply_x(), yu = u->apply_y();
    Polynomial lhs = a.xx * xu.apply_x() + a.yy * yu.apply_y() + a.xy * (yu.apply_x() + xu.apply_y());
    return ScalarField::polynomial(lhs - (*cp) * (*u));
  }
  return ScalarField::function(
      [op, u_star, c](const Point& p) { return evaluate(op, u_star, p) - c(p) * u_star(p); }, kDefaultFdStep,
      "manufactured(" + u_star.describe() + ")");
}

}  // namespace heis
