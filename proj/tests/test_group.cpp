#include "doctest.h"

#include <cmath>

#include "heis/group.hpp"
#include "heis/random.hpp"

using namespace heis;

TEST_SUITE("hgroup") {
  TEST_CASE("group law on the frame directions") {
    const Point p = group_mul({1, 0, 0}, {0, 1, 0});
    CHECK(p.x1 == 1.0);
    CHECK(p.x2 == 1.0);
    CHECK(p.x3 == -2.0);
    const Point q = group_mul({0, 1, 0}, {1, 0, 0});
    CHECK(q.x3 == 2.0);
  }

  TEST_CASE("identity and inverse") {
    const Point a{1.5, -2.0, 7.25};
    const Point e = group_mul(a, Point{0, 0, 0});
    CHECK(e.x1 == a.x1);
    CHECK(e.x3 == a.x3);
    const Point z = group_mul(group_inv(a), a);
    CHECK(z.x1 == 0.0);
    CHECK(z.x2 == 0.0);
    CHECK(z.x3 == 0.0);
  }

  TEST_CASE("dilation scales the vertical coordinate quadratically") {
    const Point d = dilate(3.0, {1, 2, 5});
    CHECK(d.x1 == 3.0);
    CHECK(d.x2 == 6.0);
    CHECK(d.x3 == 45.0);
    CHECK_THROWS_AS(dilate(0.0, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(dilate(-1.0, {1, 1, 1}), std::invalid_argument);
  }

  TEST_CASE("frame vectors") {
    const Frame f = frame({0.5, -1.5, 9.0});
    CHECK(f.X == Vec3{1.0, 0.0, -3.0});
    CHECK(f.Y == Vec3{0.0, 1.0, -1.0});
    CHECK(f.T == Vec3{0.0, 0.0, 1.0});
  }

  TEST_CASE("P at the origin is the horizontal projection") {
    const Sym3 p = p_matrix({0, 0, 4});
    CHECK(p == Sym3::diag(1, 1, 0));
    CHECK(sqrt_p({0, 0, -3}) == Sym3::diag(1, 1, 0));
  }

  TEST_CASE("P entries") {
    const Sym3 p = p_matrix({1, 2, 0});
    CHECK(p.a11 == 1.0);
    CHECK(p.a12 == 0.0);
    CHECK(p.a13 == 4.0);
    CHECK(p.a22 == 1.0);
    CHECK(p.a23 == -2.0);
    CHECK(p.a33 == 20.0);
  }

  TEST_CASE("sqrt P has eigenvalues 0, 1 and sqrt(1 + 4|x'|^2)") {
    SplitMix64 rng(11);
    for (int t = 0; t < 200; ++t) {
      const Point x = random_point(rng, -50, 50);
      const auto e = eigenvalues(sqrt_p(x));
      const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
      const double big = std::sqrt(1 + 4 * r2);
      CHECK(std::abs(e[0]) <= 1e-12 * big);
      CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(e[2] == doctest::Approx(big).epsilon(1e-12));
    }
  }

  TEST_CASE("sqrt P near the vertical axis stays continuous") {
    const Sym3 a = sqrt_p({1e-9, -2e-9, 0});
    CHECK((a - Sym3::diag(1, 1, 0)).max_abs_entry() < 1e-8);
  }
}
