#pragma once

// Degenerate fully nonlinear operators on H^1.
//
// Intrinsic form: F acts on the 2x2 horizontal Hessian, F̃(A, x) = F(Ã_x).
// Lifted form:    G acts on sqrt(P(x)) D²u sqrt(P(x)) in S^3.
// Either way the operator obeys the ellipticity bracket
//   lam Tr(H1 - H2) <= F(H1) - F(H2) <= Lam Tr(H1 - H2)   whenever H2 <= H1.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heis/calculus.hpp"

namespace heis {

struct EllipticityBracket {
  double lam = 1.0;
  double Lam = 1.0;

  /// Throws std::invalid_argument unless 0 < lam <= Lam.
  static EllipticityBracket make(double lam, double Lam);
};

enum class OperatorKind { SubLaplacian, PucciPlus, PucciMinus, TraceLinear, CustomUniform };
enum class OperatorForm { Intrinsic, Lifted };

std::string to_string(OperatorKind kind);
std::string to_string(OperatorForm form);

/// Λ Σ_{e>0} e + λ Σ_{e<0} e = max over admissible a of Tr(a H).
double pucci_plus(const Sym2& h, const EllipticityBracket& b);
/// λ Σ_{e>0} e + Λ Σ_{e<0} e = min over admissible a of Tr(a H).
double pucci_minus(const Sym2& h, const EllipticityBracket& b);
double pucci_plus(const Sym3& h, const EllipticityBracket& b);
double pucci_minus(const Sym3& h, const EllipticityBracket& b);

class OperatorSpec {
 public:
  using Custom2 = std::function<double(const Sym2&)>;
  using Custom3 = std::function<double(const Sym3&)>;

  static OperatorSpec sublaplacian(OperatorForm form = OperatorForm::Intrinsic);
  static OperatorSpec pucci_plus(EllipticityBracket b, OperatorForm form = OperatorForm::Intrinsic);
  static OperatorSpec pucci_minus(EllipticityBracket b, OperatorForm form = OperatorForm::Intrinsic);
  /// F(H) = Tr(a H); throws unless the spectrum of a lies in [lam, Lam].
  static OperatorSpec trace_linear(const Sym2& a, EllipticityBracket b);
  static OperatorSpec trace_linear(const Sym3& a, EllipticityBracket b);
  /// Monotone map with a declared bracket; the bracket is checked only by validate_operator.
  static OperatorSpec custom(Custom2 g, EllipticityBracket b, std::string name = "custom");
  static OperatorSpec custom(Custom3 g, EllipticityBracket b, std::string name = "custom");

  OperatorKind kind() const { return kind_; }
  OperatorForm form() const { return form_; }
  const EllipticityBracket& bracket() const { return bracket_; }
  const Sym2& coefficient2() const { return coeff2_; }
  const Sym3& coefficient3() const { return coeff3_; }
  const std::string& name() const { return name_; }

  /// F on S^2 (intrinsic form).
  double apply(const Sym2& h) const;
  /// G on S^3 (lifted form).
  double apply(const Sym3& h) const;

 private:
  OperatorKind kind_ = OperatorKind::SubLaplacian;
  OperatorForm form_ = OperatorForm::Intrinsic;
  EllipticityBracket bracket_{};
  Sym2 coeff2_ = Sym2::identity();
  Sym3 coeff3_ = Sym3::identity();
  Custom2 custom2_;
  Custom3 custom3_;
  std::string name_;
};

struct BracketViolation {
  std::size_t sample = 0;
  double lower_excess = 0.0;  // lam Tr(D) - (F(H1) - F(H2)), positive when violated
  double upper_excess = 0.0;  // (F(H1) - F(H2)) - Lam Tr(D), positive when violated
};

struct ValidationReport {
  std::size_t samples = 0;
  double worst_excess = 0.0;  // largest scaled excess over all samples (<= 0 when clean)
  std::vector<BracketViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Samples ordered pairs H2 <= H1 = H2 + Q^T D Q with D log-uniform in [1e-3, 1e2]
/// and records every bracket violation beyond 1e-9 * scale.
ValidationReport validate_operator(const OperatorSpec& spec, std::size_t samples, std::uint64_t seed = 0);

/// F(D^{2,*}u(p)); throws std::invalid_argument for a lifted spec.
double eval_intrinsic(const OperatorSpec& spec, const ScalarField& u, const Point& p);
/// G(sqrt(P) D²u sqrt(P)); throws std::invalid_argument for an intrinsic spec.
double eval_lifted(const OperatorSpec& spec, const ScalarField& u, const Point& p);
/// Dispatches on spec.form().
double evaluate(const OperatorSpec& spec, const ScalarField& u, const Point& p);

/// Data of the regularity statement: c >= c0 > 0, c in C^{0,beta} with
/// constant L_c, f in C^{0,beta'} with constant L_f.
struct HolderData {
  double c0 = 1.0;
  double beta = 1.0;
  double beta_prime = 1.0;
  double L_c = 0.0;
  double L_f = 0.0;

  /// Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

/// F(·) - c(p) u(p) - f(p); throws std::invalid_argument if c(p) < 0.
double residual(const OperatorSpec& spec, const ScalarField& c, const ScalarField& f, const ScalarField& u,
                const Point& p);

}  // namespace heis
