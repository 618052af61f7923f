#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "heis/linalg.hpp"

namespace heis {

/// coefficient * x1^e[0] x2^e[1] x3^e[2]
struct Monomial {
  double coefficient = 0.0;
  std::array<int, 3> exponents{};
};

/// Real polynomial in (x1, x2, x3) kept in canonical form: exponent triples are
/// unique, sorted lexicographically, and zero coefficients are dropped.
/// All algebra is exact up to coefficient arithmetic, so integer-coefficient
/// polynomials stay exact.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Monomial> terms);

  static Polynomial constant(double c);
  /// The coordinate function x_{axis+1}.
  static Polynomial coordinate(int axis);
  static Polynomial monomial(double c, int a, int b, int d);

  /// Parses "c * x1^a x2^b x3^d + ..."; throws std::invalid_argument with the offending position.
  static Polynomial parse(std::string_view text);

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  double operator()(const Point& p) const;
  /// Sum of |c| |x1|^a |x2|^b |x3|^d, a floating-point error scale for evaluation at p.
  double abs_bound(const Point& p) const;

  Polynomial derivative(int axis) const;
  /// X u = ∂1 u + 2 x2 ∂3 u
  Polynomial apply_x() const;
  /// Y u = ∂2 u - 2 x1 ∂3 u
  Polynomial apply_y() const;
  /// u ∘ δ_lam
  Polynomial dilated(double lam) const;

  std::string to_string() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(double s, const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void canonicalize();
  std::vector<Monomial> terms_;
};

}  // namespace heis
