#include "doctest.h"

#include <cmath>

#include "heis/calculus.hpp"
#include "heis/lemmas.hpp"

using namespace heis;

TEST_SUITE("hcalculus") {
  TEST_CASE("horizontal gradient and Hessian of coordinate functions") {
    const Point p{0.5, -1.0, 2.0};
    const Vec2 g = h_gradient(ScalarField::parse("x3"), p);
    CHECK(g[0] == 2 * p.x2);
    CHECK(g[1] == -2 * p.x1);
    // X(Y x3) = -2, Y(X x3) = 2: the symmetrized mixed entry vanishes
    const Sym2 h = h_hessian(ScalarField::parse("x3"), p);
    CHECK(h == Sym2{0, 0, 0});
    const Sym2 q = h_hessian(ScalarField::parse("x1^2 + 3*x2^2"), p);
    CHECK(q == Sym2{2, 0, 6});
  }

  TEST_CASE("lift of the Euclidean Hessian is the horizontal Hessian") {
    SplitMix64 rng(3);
    for (int t = 0; t < 100; ++t) {
      const ScalarField u = ScalarField::polynomial(random_polynomial(rng, 4, 6));
      const Point p = random_point(rng, -1, 1);
      const Sym2 a = lift(full_hessian(u, p), p), b = h_hessian(u, p);
      const double s = 1 + b.max_abs_entry() + full_hessian(u, p).max_abs_entry() * 20;
      CHECK(std::abs(a.xx - b.xx) <= 1e-12 * s);
      CHECK(std::abs(a.xy - b.xy) <= 1e-12 * s);
      CHECK(std::abs(a.yy - b.yy) <= 1e-12 * s);
    }
  }

  TEST_CASE("sub-Laplacian of x1^2 + x2^2 and of x3") {
    CHECK(sublaplacian(ScalarField::parse("x1^2 + x2^2"), {3, 4, 5}) == 4.0);
    CHECK(sublaplacian(ScalarField::parse("x3"), {3, 4, 5}) == 0.0);
    // (x1^2 + x2^2)^2 - 16 x3^2 style check: Δ(x3^2) = 8 |x'|^2
    CHECK(sublaplacian(ScalarField::parse("x3^2"), {1, 2, 0}) == 40.0);
  }

  TEST_CASE("finite-difference provider tracks the symbolic one") {
    const Polynomial poly = Polynomial::parse("x1^3 x2 - 2*x2^2 x3 + x3^2");
    const ScalarField exact = ScalarField::polynomial(poly);
    const ScalarField fd = ScalarField::function([poly](const Point& p) { return poly(p); });
    CHECK_FALSE(fd.is_polynomial());
    const Point p{0.3, -0.7, 0.2};
    const Sym2 a = h_hessian(exact, p), b = h_hessian(fd, p);
    CHECK(std::abs(a.xx - b.xx) < 1e-6);
    CHECK(std::abs(a.xy - b.xy) < 1e-6);
    CHECK(std::abs(a.yy - b.yy) < 1e-6);
  }

  TEST_CASE("polynomial parser errors name the position") {
    CHECK_THROWS_AS(Polynomial::parse("x1 +* x2"), std::invalid_argument);
    CHECK_THROWS_AS(Polynomial::parse("x4"), std::invalid_argument);
    CHECK(Polynomial::parse("2*x1^2 - x1^2") == Polynomial::parse("x1^2"));
  }

  TEST_CASE("dilation commutes with the frame up to the homogeneous factor") {
    const Polynomial u = Polynomial::parse("x1^2 x3 + x2^4 - 3*x1 x2 x3");
    for (double lam : {0.5, 2.0, 3.0}) {
      CHECK(u.dilated(lam).apply_x() == lam * u.apply_x().dilated(lam));
      CHECK(u.dilated(lam).apply_y() == lam * u.apply_y().dilated(lam));
    }
  }
}
