#pragma once

// Horizontal calculus on H^1: intrinsic gradient (Xu, Yu), the symmetrized
// horizontal Hessian D^{2,*}u, and the lift of a 3x3 symmetric matrix to its
// 2x2 compression along the frame.

#include <functional>
#include <memory>
#include <string>

#include "heis/group.hpp"
#include "heis/polynomial.hpp"

namespace heis {

inline constexpr double kDefaultFdStep = 1e-4;

/// A real function on R^3 with a derivative provider: exact symbolic derivatives
/// for polynomials, centered finite differences (step h_fd) otherwise.
class ScalarField {
 public:
  using Function = std::function<double(const Point&)>;

  /// The zero polynomial.
  ScalarField();

  static ScalarField polynomial(Polynomial p);
  static ScalarField parse(std::string_view text) { return polynomial(Polynomial::parse(text)); }
  static ScalarField constant(double c) { return polynomial(Polynomial::constant(c)); }
  static ScalarField function(Function f, double h_fd = kDefaultFdStep, std::string label = "function");

  double operator()(const Point& p) const;
  Vec3 gradient(const Point& p) const;
  Sym3 hessian(const Point& p) const;

  bool is_polynomial() const { return poly_ != nullptr; }
  /// Null for finite-difference fields.
  const Polynomial* polynomial_form() const;
  double fd_step() const { return h_fd_; }
  std::string describe() const;

  /// Horizontal derivatives, exact by symbolic composition for polynomials.
  Vec2 horizontal_gradient(const Point& p) const;
  Sym2 horizontal_hessian(const Point& p) const;

 private:
  struct PolyData;
  std::shared_ptr<const PolyData> poly_;
  Function fn_;
  double h_fd_ = kDefaultFdStep;
  std::string label_;
};

using HorizontalGradient = Vec2;

/// (Xu(p), Yu(p))
HorizontalGradient h_gradient(const ScalarField& u, const Point& p);
/// [[X²u, (XY+YX)u/2], [(XY+YX)u/2, Y²u]] at p
Sym2 h_hessian(const ScalarField& u, const Point& p);
/// [[<A X, X>, <A X, Y>], [<A X, Y>, <A Y, Y>]] with the frame at p.
Sym2 lift(const Sym3& a, const Point& p);
/// Classical Hessian D²u(p).
Sym3 full_hessian(const ScalarField& u, const Point& p);
/// X²u + Y²u
double sublaplacian(const ScalarField& u, const Point& p);

}  // namespace heis
