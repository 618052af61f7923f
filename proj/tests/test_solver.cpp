#include "doctest.h"

#include <cmath>

#include "heis/solver.hpp"

using namespace heis;

namespace {

ProblemSpec problem(const OperatorSpec& op, const ScalarField& c, const ScalarField& f, const ScalarField& boundary, int n) {
  ProblemSpec p;
  p.op = op;
  p.c = c;
  p.f = f;
  p.boundary = boundary;
  p.grid = Grid3::cube(-1, 1, n);
  return p;
}

ProblemSpec manufactured(const std::string& u, const OperatorSpec& op, int n) {
  const ScalarField us = ScalarField::parse(u);
  const ScalarField c = ScalarField::constant(1);
  return problem(op, c, manufacture(us, op, c), us, n);
}

// |stencil_hessian - h_hessian| at (0.5, -0.25, 0.25), a node of every cube grid with n = 2^k + 1.
double stencil_error(const ScalarField& u, int n) {
  const Grid3 g = Grid3::cube(-1, 1, n);
  GridFunction v(g);
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = u(g.point(i));
  const int i = g.nearest(0, 0.5), j = g.nearest(1, -0.25), k = g.nearest(2, 0.25);
  const Point p = g.point(i, j, k);
  const Sym2 a = stencil_hessian(v, g.index(i, j, k), &u), b = h_hessian(u, p);
  return (a - b).max_abs_entry();
}

}  // namespace

TEST_SUITE("hsolver") {
  TEST_CASE("stencil consistency of order >= 1.5 for x3-affine polynomials of degree <= 4") {
    for (const char* text : {"x1^4 + x2^4", "x1^3 x2 - x2^2 x1 + x1 x2 x3", "x1^2 x2^2 + 3*x2^3 x3", "x1^4 - 2*x2^3 + x3"}) {
      const ScalarField u = ScalarField::parse(text);
      const double e1 = stencil_error(u, 9), e2 = stencil_error(u, 17), e3 = stencil_error(u, 33);
      CAPTURE(text);
      if (e1 < 1e-10) {
        CHECK(e2 < 1e-10);
        continue;
      }
      CHECK(std::log2(e1 / e2) >= 1.5);
      CHECK(std::log2(e2 / e3) >= 1.5);
    }
  }

  TEST_CASE("quadratics without x3 curvature are reproduced exactly by the stencil") {
    const ScalarField u = ScalarField::parse("x1^2 - 3*x1 x2 + 2*x2^2 + x1 x3");
    CHECK(stencil_error(u, 9) < 1e-9);
  }

  TEST_CASE("x3 curvature carries an interpolation error that does not shrink with h") {
    // Off-node frame samples interpolate linearly in x3, leaving theta(1-theta) h3^2 u33 / h^2 = O(1).
    const ScalarField u = ScalarField::parse("x3^2");
    const double e1 = stencil_error(u, 9), e2 = stencil_error(u, 17), e3 = stencil_error(u, 33);
    CHECK(e1 > 0.1);
    CHECK(e3 > 0.5 * e2);
    CHECK(e2 > 0.5 * e1);
  }

  TEST_CASE("manufactured right-hand side") {
    const ScalarField us = ScalarField::parse("x1^4 + x2^4 + x1*x3");
    const ScalarField f = manufacture(us, OperatorSpec::sublaplacian(), ScalarField::constant(1));
    REQUIRE(f.is_polynomial());
    const Point p{0.3, 0.2, -0.7};
    CHECK(f(p) == doctest::Approx(12 * 0.09 + 12 * 0.04 + 4 * 0.2 - us(p)).epsilon(1e-13));
    CHECK_THROWS_AS(manufacture(ScalarField::function([](const Point&) { return 0.0; }), OperatorSpec::sublaplacian(),
                                ScalarField::constant(1)),
                    std::invalid_argument);
  }

  TEST_CASE("problem validation") {
    ProblemSpec p = manufactured("x1^2", OperatorSpec::sublaplacian(), 5);
    p.tol = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = manufactured("x1^2", OperatorSpec::sublaplacian(), 5);
    p.c = ScalarField::parse("x1");
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = manufactured("x1^2", OperatorSpec::sublaplacian(), 5);
    p.op = OperatorSpec::trace_linear(Sym3::identity(), EllipticityBracket::make(1, 1));
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(step(boundary_values(manufactured("x1^2", OperatorSpec::sublaplacian(), 5)),
                         manufactured("x1^2", OperatorSpec::sublaplacian(), 5), 0.0),
                    std::invalid_argument);
  }

  TEST_CASE("exactly representable solutions are recovered to the tolerance") {
    const EllipticityBracket b = EllipticityBracket::make(1, 2);
    for (const OperatorSpec& op : {OperatorSpec::sublaplacian(), OperatorSpec::pucci_plus(b), OperatorSpec::pucci_minus(b),
                                   OperatorSpec::pucci_plus(b, OperatorForm::Lifted)}) {
      ProblemSpec p = manufactured("x1^2 - 2*x2^2 + x1 x2 + x3", op, 9);
      p.tol = 1e-9;
      const SolveResult s = solve(p);
      REQUIRE(s.converged);
      double err = 0;
      for (std::size_t i = 0; i < p.grid.size(); ++i) err = std::max(err, std::abs(s.u[i] - p.boundary(p.grid.point(i))));
      CHECK(err < 1e-7);
    }
  }

  TEST_CASE("u = x3 solves the homogeneous problem with c = 0") {
    ProblemSpec p = problem(OperatorSpec::sublaplacian(), ScalarField::constant(0), ScalarField::constant(0),
                            ScalarField::parse("x3"), 17);
    const SolveResult s = solve(p);
    REQUIRE(s.converged);
    double err = 0;
    for (std::size_t i = 0; i < p.grid.size(); ++i) err = std::max(err, std::abs(s.u[i] - p.grid.point(i).x3));
    CHECK(err <= 10 * p.tol);
  }

  TEST_CASE("discrete comparison") {
    const EllipticityBracket b = EllipticityBracket::make(1, 2);
    for (const OperatorSpec& op : {OperatorSpec::sublaplacian(), OperatorSpec::pucci_minus(b)}) {
      const ScalarField g = ScalarField::parse("x1^2 x3 - x2");
      const ProblemSpec lo = problem(op, ScalarField::parse("1 + x1^2"), ScalarField::parse("1 + x2^2"),
                                     ScalarField::parse("x1^2 x3 - x2 - 0.1"), 13);
      const ProblemSpec hi = problem(op, ScalarField::parse("1 + x1^2"), ScalarField::parse("x2^2"), g, 13);
      const SolveResult a = solve(lo), c = solve(hi);
      REQUIRE(a.converged);
      REQUIRE(c.converged);
      double worst = -INFINITY;
      for (std::size_t i = 0; i < lo.grid.size(); ++i) worst = std::max(worst, a.u[i] - c.u[i]);
      CHECK(worst <= 10 * lo.tol);
    }
  }

  TEST_CASE("plain iteration: residual non-increasing after 10 iterations on the shipped problems") {
    const EllipticityBracket b = EllipticityBracket::make(1, 2);
    const ScalarField smooth_abs = ScalarField::function([](const Point& p) { return std::sqrt(p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3 + 0.01); });
    const ScalarField neg_abs = ScalarField::function([](const Point& p) { return -std::sqrt(p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3 + 0.01); });
    const std::vector<ProblemSpec> probs = {
        manufactured("x1^4 + x2^4 + x1*x3", OperatorSpec::sublaplacian(), 17),
        manufactured("x1^2 - 2*x2^2 + x3", OperatorSpec::pucci_plus(b), 17),
        problem(OperatorSpec::sublaplacian(), ScalarField::constant(1), smooth_abs, neg_abs, 17)};
    for (const ProblemSpec& p : probs) {
      SolveOptions o;
      o.acceleration = Acceleration::None;
      o.record_history = true;
      const SolveResult s = solve(p, o);
      REQUIRE(s.converged);
      std::size_t bad = 0;
      for (std::size_t k = 10; k + 1 < s.history.size(); ++k) bad += s.history[k + 1] > s.history[k];
      CHECK(bad == 0);
    }
  }

  TEST_CASE("accelerated and plain iterations reach the same fixed point") {
    ProblemSpec p = manufactured("x1^4 + x2^4 + x1*x3", OperatorSpec::sublaplacian(), 13);
    p.tol = 1e-9;
    SolveOptions plain;
    plain.acceleration = Acceleration::None;
    const SolveResult a = solve(p, plain), b = solve(p);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.u.max_abs_diff(b.u) < 1e-7);
    CHECK(b.iterations < a.iterations);
  }

  TEST_CASE("non-convergence is flagged, not thrown") {
    ProblemSpec p = manufactured("x1^4 + x2^4", OperatorSpec::sublaplacian(), 9);
    p.max_iters = 1;
    const SolveResult s = solve(p);
    CHECK_FALSE(s.converged);
    CHECK(s.iterations == 1);
  }

  TEST_CASE("non-finite data is reported") {
    ProblemSpec p = manufactured("x1^2", OperatorSpec::sublaplacian(), 5);
    p.f = ScalarField::function([](const Point&) { return std::nan(""); });
    CHECK_THROWS_AS(solve(p), std::domain_error);
  }
}
