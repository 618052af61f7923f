#pragma once

// Doubling-of-variables laboratory: the penalty L|x-y|^alpha, its Hessian M,
// M², N = M + (2/mu) M², the 6x6 block inequality
//   [[A, 0], [0, -B]] <= [[N, -N], [-N, N]],
// and the trace gaps it implies for the horizontal lift and for P-weighted traces.

#include <cstdint>
#include <optional>

#include "heis/calculus.hpp"
#include "heis/grid.hpp"
#include "heis/operators.hpp"

namespace heis {

struct PenaltyParams {
  double L = 1.0;
  double alpha = 1.0;
  double delta = 0.0;
  double eps = 0.0;
  double mu = 1.0;

  /// Throws std::invalid_argument unless L > 0, alpha in (0, 1], delta, eps >= 0, mu > 0.
  void validate() const;
};

/// L |x - y|^alpha (Euclidean).
double penalty_value(const Point& x, const Point& y, const PenaltyParams& pp);
/// M = L alpha r^{alpha-2} ((alpha-2) e⊗e + I), e = (x-y)/r. Throws for x == y.
/// Only L and alpha are read, and alpha is not restricted here so alpha = 2 can serve as a check.
Sym3 penalty_hessian(const Point& x, const Point& y, const PenaltyParams& pp);
/// M² = L² alpha² r^{2(alpha-2)} (alpha(alpha-2) e⊗e + I). Throws for x == y.
Sym3 penalty_hessian_sq(const Point& x, const Point& y, const PenaltyParams& pp);
/// N = M + (2/mu) M².
Sym3 n_matrix(const Point& x, const Point& y, const PenaltyParams& pp);
/// L alpha r^{alpha-2} + (2/mu) L² alpha² r^{2(alpha-2)}
double n_norm_bound(const Point& x, const Point& y, const PenaltyParams& pp);

/// [[N, -N], [-N, N]] - [[A, 0], [0, -B]] as a 6x6 matrix.
SymMatrix block_gap_matrix(const Sym3& a, const Sym3& b, const Sym3& n);
/// Smallest eigenvalue of block_gap_matrix; the block inequality holds iff it is >= -block_tolerance.
double block_gap(const Sym3& a, const Sym3& b, const Sym3& n);
/// 1e-9 times the largest absolute entry of A, B, N and the block matrix.
double block_tolerance(const Sym3& a, const Sym3& b, const Sym3& n);
bool block_holds(const Sym3& a, const Sym3& b, const Sym3& n);

struct AdmissiblePair {
  Sym3 A;
  Sym3 B;
};

/// Random (A, B) satisfying the block inequality against N. Draws A0, B0, then
/// shifts both by t + s where t is the largest eigenvalue of
/// [[A0, 0], [0, -B0]] - [[N, -N], [-N, N]] and s >= 0 (s = 0 in a quarter of
/// the draws, giving pairs that touch the constraint).
AdmissiblePair make_admissible_pair(const Sym3& n, std::uint64_t seed);

struct TraceGapReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double n33 = 0.0;
  double scale = 1.0;  // magnitude of the terms entering lhs and rhs
  bool holds = false;
  /// Bound in terms of the penalty parameters (lifted form, when parameters are given).
  std::optional<double> rhs_penalty;
  std::optional<bool> holds_penalty;
  std::optional<double> c2;
};

/// a(<A X(x), X(x)> - <B X(y), X(y)>) + b(<A Y(x), Y(x)> - <B Y(y), Y(y)>)
///   <= 4 (a (x2-y2)² + b (x1-y1)²) n33.
/// Throws std::invalid_argument unless (A, B, N) satisfies the block inequality and a, b >= 0.
TraceGapReport trace_gap(const Sym3& a_mat, const Sym3& b_mat, const Sym3& n, const Point& x, const Point& y,
                         double a = 1.0, double b = 1.0);

/// Tr(P(x) A - P(y) B) <= 3 |N| |sqrt P(x) - sqrt P(y)|_F² with |N| the spectral norm.
/// With penalty parameters also checks
///   Tr(P(x) A - P(y) B) <= C (L alpha r^alpha + (2/mu) L² alpha² r^{2 alpha - 2}),  C = 3 C2²,
/// where C2 defaults to sqrtp_ratio(x, y) (zero when x' = y').
TraceGapReport lifted_trace_gap(const Sym3& a_mat, const Sym3& b_mat, const Sym3& n, const Point& x,
                                const Point& y, const PenaltyParams* pp = nullptr,
                                std::optional<double> c2 = std::nullopt);

/// |sqrt P(x) - sqrt P(y)|_F / |x' - y'|. Throws std::invalid_argument when x' == y'.
double sqrtp_ratio(const Point& x, const Point& y);

struct SqrtpRatioSurvey {
  std::size_t samples = 0;
  double max_ratio = 0.0;  // empirical C2
  Point argmax_x{}, argmax_y{};
};

/// Samples pairs with gamma < |x - y| < 1/gamma and |x'|, |y'| <= radius.
SqrtpRatioSurvey survey_sqrtp_ratio(std::size_t samples, double gamma, double radius, std::uint64_t seed);

/// P S1 P <= P S2 P (minimum eigenvalue of the difference >= -1e-9 scale).
/// Throws std::invalid_argument unless P >= 0 and S1 <= S2 (same tolerance).
bool psd_sandwich_check(const Sym3& p, const Sym3& s1, const Sym3& s2);

/// For x = (0, 0, x3), y = (0, 0, y3) and sampled nonzero xi1, xi2, the third
/// component of sqrt P(x) xi1 - sqrt P(y) xi2 vanishes, so the difference is
/// never (0, 0, ±1). Throws std::invalid_argument for x3 == y3.
bool vertical_obstruction_check(double x3, double y3, std::size_t samples, std::uint64_t seed = 0);
/// Same check at arbitrary points; rejects (std::invalid_argument) x' != 0 or y' != 0.
bool vertical_obstruction_check(const Point& x, const Point& y, std::size_t samples, std::uint64_t seed = 0);

struct MaxReport {
  double theta = 0.0;     // max of psi over the sample
  Point x_hat{}, y_hat{};  // argmax pair
  double gap = 0.0;       // |x_hat - y_hat|
  bool certified = false;  // theta <= 0
  std::size_t pairs = 0;  // number of (x, y) pairs evaluated
};

struct CertificateBox {
  Point lower{};
  Point upper{};
  int samples_per_axis = 17;
  int refine_factor = 4;
};

/// psi(x, y) = u(x) - u(y) - L|x-y|^alpha - delta |x|² - eps, maximized over a
/// tensor sample of the box (samples_per_axis³ points per factor), then
/// refined once by refine_factor around the incumbent pair.
/// Throws std::domain_error on non-finite samples.
MaxReport doubling_certificate(const ScalarField& u, const PenaltyParams& pp, const CertificateBox& box);
/// Grid version: the sample is a strided lattice of nodes inside the box
/// (about samples_per_axis per axis); refinement uses the actual nodes around
/// the incumbent with the stride divided by refine_factor. No interpolation.
MaxReport doubling_certificate(const GridFunction& u, const PenaltyParams& pp, const CertificateBox& box);

/// Thresholds the contradiction argument needs on c0, reported alongside a certificate.
struct CertificateThresholds {
  double c0 = 0.0;
  bool c0_above_8 = false;
  double lipschitz_ratio = 0.0;  // L_f / L + L_c / L
  bool c0_above_lipschitz_ratio = false;
};

CertificateThresholds certificate_thresholds(const HolderData& hd, double L);

}  // namespace heis
