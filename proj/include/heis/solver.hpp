#pragma once

// Frame-aligned semi-Lagrangian scheme for F(D^{2,*}u) - c u = f on a box with
// Dirichlet data. The horizontal Hessian at a node p is sampled along the
// frozen frame:
//   X²u  ~ (u(p + hX) - 2u(p) + u(p - hX)) / h²
//   Y²u  ~ (u(p + hY) - 2u(p) + u(p - hY)) / h²
//   XYu  ~ (u(p+hX+hY) - u(p+hX-hY) - u(p-hX+hY) + u(p-hX-hY)) / (4h²)
// with h = min(h1, h2) and trilinear interpolation between nodes. Samples
// that leave the box take the boundary field, which extends u.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heis/grid.hpp"
#include "heis/operators.hpp"

namespace heis {

struct ProblemSpec {
  OperatorSpec op = OperatorSpec::sublaplacian();
  ScalarField c = ScalarField::constant(1.0);
  ScalarField f;
  ScalarField boundary;
  Grid3 grid;
  double tol = 1e-6;
  std::size_t max_iters = 200000;

  /// Throws std::invalid_argument for tol <= 0, max_iters == 0, c < 0 at a node,
  /// or an operator the stencil cannot evaluate (non-spectral lifted forms).
  void validate() const;
};

/// Boundary field sampled on every node.
GridFunction boundary_values(const ProblemSpec& prob);

/// Frame-aligned Hessian at interior node idx. With a boundary field, samples
/// outside the box take its values; without one they are clamped into the box.
/// Throws std::invalid_argument for boundary nodes.
Sym2 stencil_hessian(const GridFunction& u, std::size_t idx, const ScalarField* boundary = nullptr);

/// Precomputed stencil rows for every interior node of a problem.
class Discretization {
 public:
  explicit Discretization(const ProblemSpec& prob);

  const std::vector<std::size_t>& interior() const { return interior_; }
  /// Stability rule 0.4 h² / (Lambda (4 + c_max h²)), h = min spacing.
  double tau() const { return tau_; }
  double c_max() const { return c_max_; }

  /// r[n] = F(stencil) - c u - f at interior node interior()[n]. Returns max |r|.
  /// Throws std::domain_error naming the node when a value is not finite.
  double residual(const std::vector<double>& u, std::vector<double>& r) const;
  /// Horizontal Hessian at interior node interior()[n].
  Sym2 hessian(const std::vector<double>& u, std::size_t n) const;

 private:
  struct Row {
    std::uint32_t begin = 0, end = 0;
    double constant = 0.0;
  };
  double row_value(const Row& row, const std::vector<double>& u) const;

  const ProblemSpec* prob_;
  bool linear_ = false;
  Sym2 linear_coeff_{};
  std::vector<std::size_t> interior_;
  std::vector<Row> rows_;  // linear: one row per node; otherwise xx, yy, xy per node
  std::vector<std::uint32_t> cols_;
  std::vector<double> weights_;
  std::vector<double> c_, f_;
  double tau_ = 0.0;
  double c_max_ = 0.0;
};

/// v = u + tau (F(stencil) - c u - f) at interior nodes; boundary nodes reset to the data.
/// Throws std::invalid_argument for tau <= 0, std::domain_error on non-finite values.
GridFunction step(const GridFunction& u, const ProblemSpec& prob, double tau);

/// max over interior nodes of |F(stencil) - c u - f|.
double residual_norm(const GridFunction& u, const ProblemSpec& prob);

enum class Acceleration { None, Nesterov };

struct SolveOptions {
  /// None iterates step() verbatim. Nesterov extrapolates the iterate before
  /// each step with momentum k/(k+3) and restarts whenever the momentum opposes
  /// the residual; same fixed point, far fewer sweeps on fine grids.
  Acceleration acceleration = Acceleration::Nesterov;
  bool record_history = false;
  /// Starting interior values; zero when empty. Boundary nodes always carry the data.
  const GridFunction* initial = nullptr;
};

struct SolveResult {
  GridFunction u;
  std::size_t iterations = 0;
  double residual = 0.0;  // residual_norm of u
  double tau = 0.0;
  bool converged = false;
  std::vector<double> history;  // residual of each iterate (plain mode) or of each extrapolated point
};

SolveResult solve(const ProblemSpec& prob, const SolveOptions& opts = {});

/// f = F(D^{2,*}u*) - c u*, exact for polynomial u* and c.
/// Throws std::invalid_argument for a non-polynomial u*.
ScalarField manufacture(const ScalarField& u_star, const OperatorSpec& op, const ScalarField& c);

}  // namespace heis
