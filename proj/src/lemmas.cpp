#include "heis/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "heis/calculus.hpp"
#include "heis/group.hpp"
#include "heis/operators.hpp"
#include "heis/sums.hpp"

namespace heis {

Polynomial random_polynomial(SplitMix64& rng, int max_degree, int max_terms) {
  std::vector<Monomial> terms;
  const int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int t = 0; t < count; ++t) {
    const int deg = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_degree) + 1));
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(deg) + 1));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(deg - a) + 1));
    int c = 0;
    do c = static_cast<int>(rng.below(11)) - 5;
    while (c == 0);
    terms.push_back({static_cast<double>(c), {a, b, deg - a - b}});
  }
  return Polynomial(std::move(terms));
}

namespace {

constexpr double kPi = 3.141592653589793;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double rel(double err, double scale) { return err / std::max(scale, 1e-300); }

double sup_norm(const Point& p) { return std::max({std::abs(p.x1), std::abs(p.x2), std::abs(p.x3)}); }

double point_diff(const Point& a, const Point& b) {
  return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3)});
}

// Seeds of different checks are decorrelated by the check index.
std::uint64_t check_seed(std::uint64_t seed, std::uint64_t check) { return seed ^ (0x9E3779B97F4A7C15ULL * (check + 1)); }

struct Check {
  LemmaInfo info;
  std::function<LemmaResult(std::uint64_t)> run;
};

LemmaResult result(std::size_t trials, double worst, double tol, std::string note = {}) {
  LemmaResult r;
  r.trials = trials;
  r.worst_gap = worst;
  r.tolerance = tol;
  r.pass = std::isfinite(worst) && worst <= tol;
  r.note = std::move(note);
  return r;
}

// hgroup --------------------------------------------------------------------

LemmaResult group_associativity(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point a = random_point(rng, -10, 10), b = random_point(rng, -10, 10), c = random_point(rng, -10, 10);
    const Point l = group_mul(group_mul(a, b), c), r = group_mul(a, group_mul(b, c));
    const double scale = (1 + sup_norm(a)) * (1 + sup_norm(b)) * (1 + sup_norm(c));
    worst = std::max(worst, rel(point_diff(l, r), scale));
  }
  return result(n, worst, 1e-12);
}

LemmaResult group_inverse(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point a = random_point(rng, -1e3, 1e3);
    worst = std::max({worst, sup_norm(group_mul(a, group_inv(a))), sup_norm(group_mul(group_inv(a), a))});
  }
  return result(n, worst, 0.0, "exact");
}

LemmaResult group_dilation(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point a = random_point(rng, -10, 10), b = random_point(rng, -10, 10);
    const double lam = rng.log_uniform(1e-2, 1e2);
    const Point l = dilate(lam, group_mul(a, b)), r = group_mul(dilate(lam, a), dilate(lam, b));
    worst = std::max(worst, rel(point_diff(l, r), lam * lam * (1 + sup_norm(a)) * (1 + sup_norm(b))));
  }
  return result(n, worst, 1e-12);
}

LemmaResult frame_commutator(std::uint64_t seed) {
  const std::size_t n = 100;
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Polynomial u = random_polynomial(rng, 6, 8);
    const Polynomial lhs = u.apply_y().apply_x() - u.apply_x().apply_y();
    const Polynomial rhs = -4.0 * u.derivative(2);
    if (!(lhs == rhs)) ++mismatches;
  }
  return result(n, static_cast<double>(mismatches), 0.0, "symbolic identity; worst-gap counts mismatching polynomials");
}

LemmaResult p_gram(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point p = random_point(rng, -1e3, 1e3);
    const Vec3 x = field_x(p), y = field_y(p);
    const Sym3 oracle = Sym3::outer(x) + Sym3::outer(y);
    worst = std::max({worst, (p_matrix(p) - oracle).max_abs_entry(), (sigma(p).gram() - oracle).max_abs_entry()});
  }
  return result(n, worst, 0.0, "exact");
}

LemmaResult p_kernel_check(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point p = random_point(rng, -1e3, 1e3);
    const Vec3 k{-2.0 * p.x2, 2.0 * p.x1, 1.0};
    const Vec3 v = p_matrix(p).apply(k);
    worst = std::max({worst, std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
  }
  return result(n, worst, 0.0, "exact");
}

LemmaResult sqrtp_square(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point p = random_point(rng, -1e3, 1e3);
    const Sym3 s = sqrt_p(p), pm = p_matrix(p);
    worst = std::max(worst, rel((square(s) - pm).max_abs_entry(), pm.max_abs_entry()));
    worst = std::max(worst, rel(-eigenvalues(s)[0], spectral_norm(s)));  // PSD defect
  }
  return result(n, worst, 1e-10, "relative error of (sqrt P)^2 against P; PSD defect folded in");
}

// hcalculus -----------------------------------------------------------------

struct QuadParts {
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
};

QuadParts quadratic_form_parts(const ScalarField& u, const Polynomial* poly, const Point& p, double a, double b) {
  const Vec3 v = a * field_x(p) + b * field_y(p);
  const Sym3 d2 = full_hessian(u, p);
  const Sym2 hs = h_hessian(u, p);
  QuadParts q;
  q.lhs = d2.quad(v);
  q.rhs = hs.quad({a, b});
  if (poly) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        q.scale += poly->derivative(i).derivative(j).abs_bound(p) * std::abs(v[i] * v[j]);
    const Polynomial xx = poly->apply_x().apply_x(), yy = poly->apply_y().apply_y();
    const Polynomial xy = poly->apply_y().apply_x() + poly->apply_x().apply_y();
    q.scale += xx.abs_bound(p) * a * a + xy.abs_bound(p) * std::abs(a * b) + yy.abs_bound(p) * b * b;
  } else {
    Sym3 absd{std::abs(d2.a11), std::abs(d2.a12), std::abs(d2.a13), std::abs(d2.a22), std::abs(d2.a23), std::abs(d2.a33)};
    const Vec3 av{std::abs(v[0]), std::abs(v[1]), std::abs(v[2])};
    q.scale = absd.quad(av) + std::abs(hs.xx) * a * a + 2 * std::abs(hs.xy * a * b) + std::abs(hs.yy) * b * b;
  }
  return q;
}

LemmaResult calculus_quadratic_form(std::uint64_t seed) {
  const std::size_t n = 1000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Polynomial poly = random_polynomial(rng, 6, 8);
    const Point p = random_point(rng, -2, 2);
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const QuadParts q = quadratic_form_parts(ScalarField::polynomial(poly), &poly, p, a, b);
    worst = std::max(worst, rel(std::abs(q.lhs - q.rhs), q.scale));
  }
  return result(n, worst, 1e-12);
}

LemmaResult calculus_quadratic_form_fd(std::uint64_t seed) {
  const std::size_t n = 1000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Polynomial poly = random_polynomial(rng, 4, 6);
    const ScalarField u = ScalarField::function([poly](const Point& x) { return poly(x); });
    const Point p = random_point(rng, -1, 1);
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    // Same identity through the finite-difference provider; errors scaled by the exact polynomial magnitudes.
    const QuadParts exact = quadratic_form_parts(ScalarField::polynomial(poly), &poly, p, a, b);
    const QuadParts q = quadratic_form_parts(u, nullptr, p, a, b);
    worst = std::max(worst, rel(std::abs(q.lhs - q.rhs), std::max(exact.scale, 1.0)));
  }
  return result(n, worst, 1e-6);
}

LemmaResult calculus_trace(std::uint64_t seed) {
  const std::size_t n = 1000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Polynomial poly = random_polynomial(rng, 6, 8);
    const ScalarField u = ScalarField::polynomial(poly);
    const Point p = random_point(rng, -2, 2);
    const Sym3 d2 = full_hessian(u, p);
    const double t1 = lift(d2, p).trace();
    const double t2 = trace(multiply(p_matrix(p), d2));
    const double t3 = sublaplacian(u, p);
    Sym3 absd{std::abs(d2.a11), std::abs(d2.a12), std::abs(d2.a13), std::abs(d2.a22), std::abs(d2.a23), std::abs(d2.a33)};
    const Sym3 pm = p_matrix(p);
    const Sym3 absp{std::abs(pm.a11), std::abs(pm.a12), std::abs(pm.a13), std::abs(pm.a22), std::abs(pm.a23), std::abs(pm.a33)};
    const double scale = trace(multiply(absp, absd)) + poly.apply_x().apply_x().abs_bound(p) +
                         poly.apply_y().apply_y().abs_bound(p);
    worst = std::max({worst, rel(std::abs(t1 - t2), scale), rel(std::abs(t1 - t3), scale)});
  }
  return result(n, worst, 1e-12);
}

LemmaResult calculus_dilation(std::uint64_t seed) {
  const std::size_t n = 200;
  const double lams[] = {0.25, 0.5, 2.0, 3.0};
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Polynomial u = random_polynomial(rng, 6, 8);
    const double lam = lams[rng.below(4)];
    const Polynomial ud = u.dilated(lam);
    const bool ok = ud.apply_x() == lam * u.apply_x().dilated(lam) && ud.apply_y() == lam * u.apply_y().dilated(lam) &&
                    ud.apply_x().apply_x() + ud.apply_y().apply_y() ==
                        lam * lam * (u.apply_x().apply_x() + u.apply_y().apply_y()).dilated(lam);
    if (!ok) ++mismatches;
  }
  return result(n, static_cast<double>(mismatches), 0.0, "symbolic identity; worst-gap counts mismatching polynomials");
}

// hoperators ----------------------------------------------------------------

// Brute-force Pucci extremes over a = R(theta) diag(d1, d2) R(theta)^T with
// theta on a uniform grid and (d1, d2) at the corners of [lam, Lam]^2.
// Tr(aH) is linear in (d1, d2), so corners suffice for each theta.
std::pair<double, double> pucci_brute_force(const Sym2& h, const EllipticityBracket& b, int angles) {
  double hi = -INFINITY, lo = INFINITY;
  const double ds[2] = {b.lam, b.Lam};
  for (int k = 0; k < angles; ++k) {
    const double th = kPi * k / angles;
    const double c = std::cos(th), s = std::sin(th);
    // Tr(aH) = d1 <H e1, e1> + d2 <H e2, e2> with e1 = (c, s), e2 = (-s, c)
    const double q1 = h.quad({c, s}), q2 = h.quad({-s, c});
    for (double d1 : ds)
      for (double d2 : ds) {
        const double v = d1 * q1 + d2 * q2;
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
  }
  return {lo, hi};
}

LemmaResult pucci_brute(std::uint64_t seed) {
  const std::size_t n = 100;
  const EllipticityBracket b = EllipticityBracket::make(1.0, 2.0);
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Sym2 h = random_sym2(rng, 10.0);
    const auto [lo, hi] = pucci_brute_force(h, b, 25000);
    worst = std::max({worst, std::abs(pucci_plus(h, b) - hi), std::abs(pucci_minus(h, b) - lo)});
  }
  return result(n, worst, 1e-6, "1e5 admissible matrices per H (25000 angles x 4 eigenvalue corners)");
}

LemmaResult pucci_duality(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const EllipticityBracket b = EllipticityBracket::make(rng.uniform(0.1, 1.0), rng.uniform(1.0, 5.0));
    const Sym2 h2 = random_sym2(rng, 10.0);
    const Sym3 h3 = random_sym3(rng, 10.0);
    worst = std::max({worst, std::abs(pucci_minus(h2, b) + pucci_plus(-h2, b)),
                      std::abs(pucci_minus(h3, b) + pucci_plus(-h3, b))});
  }
  return result(n, worst, 0.0, "exact");
}

LemmaResult pucci_extremality(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = -INFINITY;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const EllipticityBracket b = EllipticityBracket::make(rng.uniform(0.1, 1.0), rng.uniform(1.0, 5.0));
    const Sym2 h2 = random_sym2(rng, 10.0);
    const Sym2 a2 = rotated_diag2(rng.uniform(0, kPi), rng.uniform(b.lam, b.Lam), rng.uniform(b.lam, b.Lam));
    const double v2 = a2.xx * h2.xx + 2 * a2.xy * h2.xy + a2.yy * h2.yy;
    const double s2 = b.Lam * (std::abs(h2.xx) + 2 * std::abs(h2.xy) + std::abs(h2.yy));
    const Sym3 h3 = random_sym3(rng, 10.0);
    const Sym3 a3 = rotated_diag3(random_rotation3(rng), {rng.uniform(b.lam, b.Lam), rng.uniform(b.lam, b.Lam),
                                                          rng.uniform(b.lam, b.Lam)});
    const double v3 = trace(multiply(a3, h3));
    const double s3 = b.Lam * 3.0 * h3.frobenius();
    worst = std::max({worst, rel(pucci_minus(h2, b) - v2, s2), rel(v2 - pucci_plus(h2, b), s2),
                      rel(pucci_minus(h3, b) - v3, s3), rel(v3 - pucci_plus(h3, b), s3)});
  }
  return result(n, worst, 1e-12, "scaled excess of Tr(aH) outside [P-(H), P+(H)]");
}

std::vector<OperatorSpec> shipped_operators() {
  const EllipticityBracket b = EllipticityBracket::make(0.5, 2.0);
  std::vector<OperatorSpec> ops;
  for (OperatorForm form : {OperatorForm::Intrinsic, OperatorForm::Lifted}) {
    ops.push_back(OperatorSpec::sublaplacian(form));
    ops.push_back(OperatorSpec::pucci_plus(b, form));
    ops.push_back(OperatorSpec::pucci_minus(b, form));
  }
  ops.push_back(OperatorSpec::trace_linear(Sym2{1.2, 0.3, 0.8}, b));
  ops.push_back(OperatorSpec::trace_linear(Sym3{1.5, 0.2, -0.1, 1.0, 0.3, 0.9}, b));
  return ops;
}

LemmaResult operator_bracket(std::uint64_t seed) {
  const std::size_t per = 2000;
  double worst = -INFINITY;
  std::size_t trials = 0;
  std::string bad;
  for (const OperatorSpec& op : shipped_operators()) {
    const ValidationReport rep = validate_operator(op, per, seed);
    trials += rep.samples;
    worst = std::max(worst, rep.worst_excess);
    if (!rep.ok()) bad += " " + to_string(op.kind()) + "/" + to_string(op.form());
  }
  // Negative control: 3 Tr(H) declared with Lam = 2 must be flagged.
  const OperatorSpec wrong = OperatorSpec::custom([](const Sym2& h) { return 3.0 * h.trace(); },
                                                  EllipticityBracket::make(1.0, 2.0), "three_trace");
  const bool control_flagged = !validate_operator(wrong, 200, seed).ok();
  LemmaResult r = result(trials, worst, 1e-9);
  r.pass = r.pass && bad.empty() && control_flagged;
  r.note = std::string("negative control ") + (control_flagged ? "flagged" : "NOT flagged") +
           (bad.empty() ? "" : "; violations in" + bad);
  return r;
}

LemmaResult operator_homogeneity(std::uint64_t seed) {
  const std::size_t n = 5000;
  const std::vector<OperatorSpec> ops = shipped_operators();
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const double s = rng.below(4) == 0 ? 0.0 : rng.log_uniform(1e-3, 1e3);
    const Sym2 h2 = random_sym2(rng, 10.0);
    const Sym3 h3 = random_sym3(rng, 10.0);
    for (const OperatorSpec& op : ops) {
      const bool intrinsic = op.form() == OperatorForm::Intrinsic;
      const double f = intrinsic ? op.apply(h2) : op.apply(h3);
      const double fs = intrinsic ? op.apply(s * h2) : op.apply(s * h3);
      const double scale = s * op.bracket().Lam * (intrinsic ? 2 * h2.max_abs_entry() : 3 * h3.max_abs_entry());
      worst = std::max(worst, rel(std::abs(fs - s * f), std::max(scale, 1e-300)));
    }
  }
  return result(n, worst, 1e-12);
}

LemmaResult operator_lifted_trace(std::uint64_t seed) {
  const std::size_t n = 1000;
  double worst = 0.0;
  const EllipticityBracket b = EllipticityBracket::make(0.5, 2.0);
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Polynomial poly = random_polynomial(rng, 4, 6);
    const ScalarField u = ScalarField::polynomial(poly);
    const Point p = random_point(rng, -3, 3);
    const Sym3 d2 = full_hessian(u, p);
    const Sym3 lifted = congruence(sqrt_p(p), d2);
    const Sym2 hs = h_hessian(u, p);
    const double scale = std::max(1.0, p_matrix(p).max_abs_entry()) * 9.0 * d2.max_abs_entry() + 2 * hs.max_abs_entry();
    worst = std::max({worst, rel(std::abs(lifted.trace() - trace(multiply(p_matrix(p), d2))), scale),
                      rel(std::abs(lifted.trace() - hs.trace()), scale),
                      // spectral operators see the same nonzero spectrum in either form
                      rel(std::abs(pucci_plus(lifted, b) - pucci_plus(hs, b)), b.Lam * scale),
                      rel(std::abs(pucci_minus(lifted, b) - pucci_minus(hs, b)), b.Lam * scale)});
  }
  return result(n, worst, 1e-9);
}

// sumslab -------------------------------------------------------------------

PenaltyParams random_penalty(SplitMix64& rng) {
  PenaltyParams pp;
  const double alphas[] = {0.3, 0.5, 0.9, 1.0};
  pp.alpha = alphas[rng.below(4)];
  pp.L = rng.log_uniform(1e-2, 1e2);
  pp.mu = rng.log_uniform(1e-2, 1e2);
  return pp;
}

std::pair<Point, Point> random_pair(SplitMix64& rng) {
  const Point x = random_point(rng, -5, 5);
  const double r = rng.log_uniform(1e-2, 5.0);
  return {x, to_point(to_vec(x) + r * random_unit_vector(rng))};
}

LemmaResult penalty_fd(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const PenaltyParams pp = random_penalty(rng);
    const Point x = random_point(rng, -2, 2);
    const Point y = to_point(to_vec(x) + rng.log_uniform(0.1, 3.0) * random_unit_vector(rng));
    const double r = distance(x, y);
    const double h = 1e-3 * r;
    auto phi = [&](const Vec3& v) { return pp.L * std::pow(distance(to_point(v), y), pp.alpha); };
    const Vec3 xv = to_vec(x);
    const Sym3 m = penalty_hessian(x, y, pp);
    double err = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        Vec3 ei{}, ej{};
        ei[i] = h;
        ej[j] = h;
        // fourth-order centered differences
        auto d = [&](double a, double b) { return phi(xv + a * ei + b * ej); };
        double fd;
        if (i == j) {
          fd = (-d(2, 0) + 16 * d(1, 0) - 30 * d(0, 0) + 16 * d(-1, 0) - d(-2, 0)) / (12 * h * h);
        } else {
          auto mixed = [&](double s) { return (d(s, s) - d(s, -s) - d(-s, s) + d(-s, -s)) / (4 * s * s * h * h); };
          fd = (4 * mixed(1) - mixed(2)) / 3;
        }
        err = std::max(err, std::abs(fd - m(i, j)));
      }
    const double scale = pp.L * pp.alpha * std::pow(r, pp.alpha - 2) * std::max(1.0, 2 - pp.alpha);
    worst = std::max(worst, rel(err, scale));
  }
  return result(n, worst, 1e-6);
}

LemmaResult penalty_square(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const PenaltyParams pp = random_penalty(rng);
    const auto [x, y] = random_pair(rng);
    const Sym3 m = penalty_hessian(x, y, pp);
    const Sym3 oracle = Sym3::symmetric_part(multiply(m, m));
    worst = std::max(worst, rel((penalty_hessian_sq(x, y, pp) - oracle).max_abs_entry(), oracle.max_abs_entry()));
  }
  return result(n, worst, 1e-10);
}

LemmaResult penalty_block_square(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const PenaltyParams pp = random_penalty(rng);
    const auto [x, y] = random_pair(rng);
    const Sym3 m = penalty_hessian(x, y, pp), m2 = penalty_hessian_sq(x, y, pp);
    double k[6][6];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) k[i][j] = ((i < 3) == (j < 3) ? 1.0 : -1.0) * m(i % 3, j % 3);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int l = 0; l < 6; ++l) s += k[i][l] * k[l][j];
        const double want = 2.0 * ((i < 3) == (j < 3) ? 1.0 : -1.0) * m2(i % 3, j % 3);
        err = std::max(err, std::abs(s - want));
        scale = std::max(scale, std::abs(want));
      }
    worst = std::max(worst, rel(err, scale));
  }
  return result(n, worst, 1e-10);
}

LemmaResult penalty_n_norm(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = -INFINITY;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const PenaltyParams pp = random_penalty(rng);
    const auto [x, y] = random_pair(rng);
    const double bound = n_norm_bound(x, y, pp);
    worst = std::max(worst, rel(spectral_norm(n_matrix(x, y, pp)) - bound, bound));
  }
  return result(n, worst, 1e-12, "scaled excess of |N| over the bound");
}

struct Instance {
  Point x, y;
  PenaltyParams pp;
  Sym3 n;
  AdmissiblePair ab;
};

Instance admissible_instance(std::uint64_t seed, std::size_t t) {
  SplitMix64 rng = SplitMix64::for_trial(seed, t);
  Instance in;
  in.pp = random_penalty(rng);
  std::tie(in.x, in.y) = random_pair(rng);
  in.n = n_matrix(in.x, in.y, in.pp);
  in.ab = make_admissible_pair(in.n, rng());
  return in;
}

LemmaResult block_scalar(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = -INFINITY;
  for (std::size_t t = 0; t < n; ++t) {
    const Instance in = admissible_instance(seed, t);
    SplitMix64 rng = SplitMix64::for_trial(seed ^ 0x5555, t);
    const Vec3 xi = rng.log_uniform(1e-2, 1e2) * random_unit_vector(rng);
    const Vec3 eta = rng.log_uniform(1e-2, 1e2) * random_unit_vector(rng);
    const Vec3 d = xi - eta;
    const double lhs = in.ab.A.quad(xi) - in.ab.B.quad(eta);
    const double rhs = in.n.quad(d);
    const double scale = spectral_norm(in.ab.A) * dot(xi, xi) + spectral_norm(in.ab.B) * dot(eta, eta) +
                         spectral_norm(in.n) * dot(d, d);
    worst = std::max(worst, rel(lhs - rhs, scale));
  }
  return result(n, worst, 1e-9, "scaled excess; pairs from the shifted admissible construction");
}

LemmaResult trace_gap_intrinsic(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = -INFINITY;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const Instance in = admissible_instance(seed, t);
    SplitMix64 rng = SplitMix64::for_trial(seed ^ 0xAAAA, t);
    const double a = rng.uniform(0, 3), b = rng.uniform(0, 3);
    const TraceGapReport rep = trace_gap(in.ab.A, in.ab.B, in.n, in.x, in.y, a, b);
    failures += !rep.holds;
    worst = std::max(worst, rel(rep.lhs - rep.rhs, rep.scale));
  }
  LemmaResult r = result(n, worst, 1e-9);
  r.pass = r.pass && failures == 0;
  return r;
}

LemmaResult trace_gap_lifted(std::uint64_t seed) {
  const std::size_t n = 10000;
  double worst = -INFINITY;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const Instance in = admissible_instance(seed, t);
    const TraceGapReport rep = lifted_trace_gap(in.ab.A, in.ab.B, in.n, in.x, in.y, &in.pp);
    failures += !rep.holds || !rep.holds_penalty.value_or(false);
    const double s2 = rep.scale + std::abs(*rep.rhs_penalty);
    worst = std::max({worst, rel(rep.lhs - rep.rhs, rep.scale), rel(rep.lhs - *rep.rhs_penalty, s2)});
  }
  LemmaResult r = result(n, worst, 1e-9, "both the |N| form and the penalty-parameter form");
  r.pass = r.pass && failures == 0;
  return r;
}

LemmaResult sandwich(std::uint64_t seed) {
  const std::size_t n = 10000;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Sym3 p = rng.below(2) ? p_matrix(random_point(rng, -10, 10)) : random_psd3(rng, 1e-3, 1e2);
    const Sym3 s1 = random_sym3(rng, 10.0);
    const Sym3 s2 = s1 + random_psd3(rng, 1e-3, 1e2);
    failures += !psd_sandwich_check(p, s1, s2);
  }
  return result(n, static_cast<double>(failures), 0.0, "worst-gap counts failures");
}

// Frobenius Lipschitz constant of sqrt P by directional differences on a
// (radius, direction) grid; sqrt P depends only on x' and is rotation covariant,
// so x' = (rho, 0) suffices.
double sqrtp_lipschitz_oracle(double radius) {
  double best = 0.0;
  const int nr = 400, na = 72;
  for (int i = 0; i <= nr; ++i) {
    const double rho = i == 0 ? 0.0 : 1e-4 * std::pow(radius / 1e-4, static_cast<double>(i - 1) / (nr - 1));
    for (int k = 0; k < na; ++k) {
      const double th = kPi * k / na;
      const Vec3 v{std::cos(th), std::sin(th), 0.0};
      const double h = 1e-6 * std::max(1.0, rho);
      const Point a = to_point(Vec3{rho, 0, 0} + h * v), b = to_point(Vec3{rho, 0, 0} - h * v);
      best = std::max(best, (sqrt_p(a) - sqrt_p(b)).frobenius() / (2 * h));
    }
  }
  return best;
}

LemmaResult sqrtp_ratio_check(std::uint64_t seed) {
  const std::size_t n = 100000;
  const SqrtpRatioSurvey s = survey_sqrtp_ratio(n, 0.1, 1e3, seed);
  const double lip = sqrtp_lipschitz_oracle(1e3);
  LemmaResult r = result(n, s.max_ratio, lip * 1.01,
                         "empirical C2 = " + fmt(s.max_ratio) + "; tolerance is 1.01 x the Lipschitz constant of sqrt P");
  return r;
}

LemmaResult sqrtp_locality(std::uint64_t seed) {
  const std::size_t n = 10000;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const Point x = random_point(rng, -1e3, 1e3);
    const Point y{x.x1, x.x2, rng.uniform(-1e3, 1e3)};
    failures += !(sqrt_p(x) == sqrt_p(y));
  }
  return result(n, static_cast<double>(failures), 0.0, "exact; worst-gap counts failures");
}

LemmaResult vertical_obstruction(std::uint64_t seed) {
  const std::size_t n = 1000;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < n; ++t) {
    SplitMix64 rng = SplitMix64::for_trial(seed, t);
    const double x3 = rng.uniform(-10, 10);
    double y3 = rng.uniform(-10, 10);
    if (y3 == x3) y3 += 1.0;
    failures += !vertical_obstruction_check(x3, y3, 10, rng());
  }
  return result(n * 10, static_cast<double>(failures), 0.0, "worst-gap counts failures");
}

LemmaResult certificate_sanity(std::uint64_t) {
  PenaltyParams pp;
  pp.alpha = 0.5;
  pp.L = 1.0;
  pp.delta = 1e-6;
  pp.eps = 1e-6;
  CertificateBox box{{-1, -1, -1}, {1, 1, 1}, 9, 4};
  // |x|^{1/2} is 1/2-Hölder with constant 1: certified.
  const ScalarField root = ScalarField::function([](const Point& p) { return std::sqrt(norm(p)); });
  const MaxReport a = doubling_certificate(root, pp, box);
  // constant: theta = -eps exactly (attained on the diagonal at the origin)
  const MaxReport c = doubling_certificate(ScalarField::constant(3.0), pp, box);
  // x1 with a small constant on a large box: not certified.
  PenaltyParams small = pp;
  small.L = 0.1;
  const MaxReport b = doubling_certificate(ScalarField::parse("x1"), small, CertificateBox{{-10, -10, -10}, {10, 10, 10}, 9, 4});
  LemmaResult r = result(a.pairs + b.pairs + c.pairs, a.theta, 0.0,
                         "sqrt|x|: theta = " + fmt(a.theta) + "; constant: theta = " + fmt(c.theta) +
                             "; x1 with L = 0.1: theta = " + fmt(b.theta));
  r.pass = a.certified && c.theta == -pp.eps && !b.certified;
  return r;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {{"group.associativity", "hgroup"}, group_associativity},
      {{"group.inverse", "hgroup"}, group_inverse},
      {{"group.dilation", "hgroup"}, group_dilation},
      {{"frame.commutator", "hgroup"}, frame_commutator},
      {{"p_matrix.gram", "hgroup"}, p_gram},
      {{"p_matrix.kernel", "hgroup"}, p_kernel_check},
      {{"sqrt_p.square", "hgroup"}, sqrtp_square},
      {{"calculus.quadratic_form", "hcalculus"}, calculus_quadratic_form},
      {{"calculus.quadratic_form_fd", "hcalculus"}, calculus_quadratic_form_fd},
      {{"calculus.trace", "hcalculus"}, calculus_trace},
      {{"calculus.dilation", "hcalculus"}, calculus_dilation},
      {{"pucci.brute_force", "hoperators"}, pucci_brute},
      {{"pucci.duality", "hoperators"}, pucci_duality},
      {{"pucci.extremality", "hoperators"}, pucci_extremality},
      {{"operator.bracket", "hoperators"}, operator_bracket},
      {{"operator.homogeneity", "hoperators"}, operator_homogeneity},
      {{"operator.lifted_trace", "hoperators"}, operator_lifted_trace},
      {{"penalty.fd_hessian", "sumslab"}, penalty_fd},
      {{"penalty.square", "sumslab"}, penalty_square},
      {{"penalty.block_square", "sumslab"}, penalty_block_square},
      {{"penalty.n_norm", "sumslab"}, penalty_n_norm},
      {{"block.scalar", "sumslab"}, block_scalar},
      {{"trace_gap.intrinsic", "sumslab"}, trace_gap_intrinsic},
      {{"trace_gap.lifted", "sumslab"}, trace_gap_lifted},
      {{"psd_sandwich", "sumslab"}, sandwich},
      {{"sqrt_p.ratio", "sumslab"}, sqrtp_ratio_check},
      {{"sqrt_p.locality", "sumslab"}, sqrtp_locality},
      {{"vertical_obstruction", "sumslab"}, vertical_obstruction},
      {{"certificate.sanity", "sumslab"}, certificate_sanity},
  };
  return all;
}

}  // namespace

std::vector<LemmaInfo> lemma_catalog() {
  std::vector<LemmaInfo> out;
  for (const Check& c : checks()) out.push_back(c.info);
  return out;
}

bool matches_filter(const LemmaInfo& info, const std::string& filter) {
  return filter.empty() || info.module == filter || info.id.rfind(filter, 0) == 0;
}

std::vector<LemmaResult> run_suite(std::uint64_t seed, const std::string& filter) {
  std::vector<LemmaResult> out;
  const auto& all = checks();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!matches_filter(all[i].info, filter)) continue;
    LemmaResult r = all[i].run(check_seed(seed, i));
    r.id = all[i].info.id;
    r.module = all[i].info.module;
    out.push_back(std::move(r));
  }
  if (out.empty()) throw std::invalid_argument("no check matches filter '" + filter + "'");
  return out;
}

}  // namespace heis
