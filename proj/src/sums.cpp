#include "heis/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "heis/random.hpp"

namespace heis {

void PenaltyParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("penalty: L must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("penalty: alpha must lie in (0, 1]");
  if (!(delta >= 0.0) || !(eps >= 0.0)) throw std::invalid_argument("penalty: delta and eps must be nonnegative");
  if (!(mu > 0.0)) throw std::invalid_argument("penalty: mu must be positive");
}

double penalty_value(const Point& x, const Point& y, const PenaltyParams& pp) {
  return pp.L * std::pow(distance(x, y), pp.alpha);
}

namespace {

struct Direction {
  double r;
  Vec3 e;
};

Direction direction(const Point& x, const Point& y, const char* who) {
  const Vec3 d = to_vec(x) - to_vec(y);
  const double r = norm(d);
  if (!(r > 0.0)) throw std::invalid_argument(std::string(who) + ": x and y coincide");
  return {r, (1.0 / r) * d};
}

// Σ_ij |a_ij b_ij| over the full matrices.
double abs_dot(const Sym3& a, const Sym3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += std::abs(a(i, j) * b(i, j));
  return s;
}

}  // namespace

Sym3 penalty_hessian(const Point& x, const Point& y, const PenaltyParams& pp) {
  const auto [r, e] = direction(x, y, "penalty_hessian");
  const double c = pp.L * pp.alpha * std::pow(r, pp.alpha - 2.0);
  return c * (Sym3::outer(e, pp.alpha - 2.0) + Sym3::identity());
}

Sym3 penalty_hessian_sq(const Point& x, const Point& y, const PenaltyParams& pp) {
  const auto [r, e] = direction(x, y, "penalty_hessian_sq");
  const double c = pp.L * pp.L * pp.alpha * pp.alpha * std::pow(r, 2.0 * (pp.alpha - 2.0));
  return c * (Sym3::outer(e, pp.alpha * (pp.alpha - 2.0)) + Sym3::identity());
}

Sym3 n_matrix(const Point& x, const Point& y, const PenaltyParams& pp) {
  if (!(pp.mu > 0.0)) throw std::invalid_argument("n_matrix: mu must be positive");
  return penalty_hessian(x, y, pp) + (2.0 / pp.mu) * penalty_hessian_sq(x, y, pp);
}

double n_norm_bound(const Point& x, const Point& y, const PenaltyParams& pp) {
  const auto [r, e] = direction(x, y, "n_norm_bound");
  (void)e;
  return pp.L * pp.alpha * std::pow(r, pp.alpha - 2.0) +
         (2.0 / pp.mu) * pp.L * pp.L * pp.alpha * pp.alpha * std::pow(r, 2.0 * (pp.alpha - 2.0));
}

SymMatrix block_gap_matrix(const Sym3& a, const Sym3& b, const Sym3& n) {
  SymMatrix m(6);
  m.set_block(0, 0, n - a);
  m.set_block(0, 3, n, -1.0);
  m.set_block(3, 0, n, -1.0);
  m.set_block(3, 3, n + b);
  return m;
}

double block_gap(const Sym3& a, const Sym3& b, const Sym3& n) { return min_eigenvalue(block_gap_matrix(a, b, n)); }

double block_tolerance(const Sym3& a, const Sym3& b, const Sym3& n) {
  return 1e-9 * std::max({a.max_abs_entry(), b.max_abs_entry(), n.max_abs_entry(),
                          block_gap_matrix(a, b, n).max_abs_entry()});
}

bool block_holds(const Sym3& a, const Sym3& b, const Sym3& n) {
  return block_gap(a, b, n) >= -block_tolerance(a, b, n);
}

AdmissiblePair make_admissible_pair(const Sym3& n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double s = std::max(1.0, n.max_abs_entry());
  const Sym3 a0 = random_sym3(rng, s);
  const Sym3 b0 = random_sym3(rng, s);
  // Largest eigenvalue of diag(A0, -B0) - [[N,-N],[-N,N]].
  const double t = -block_gap(a0, b0, n);
  const double extra = rng.below(4) == 0 ? 0.0 : s * rng.log_uniform(1e-3, 1.0);
  const double shift = t + extra;
  return {a0 - shift * Sym3::identity(), b0 + shift * Sym3::identity()};
}

TraceGapReport trace_gap(const Sym3& a_mat, const Sym3& b_mat, const Sym3& n, const Point& x, const Point& y,
                         double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("trace_gap: weights must be nonnegative");
  if (!block_holds(a_mat, b_mat, n)) throw std::invalid_argument("trace_gap: block inequality does not hold");
  const Vec3 xx = field_x(x), xy = field_x(y), yx = field_y(x), yy = field_y(y);
  const double t1 = a_mat.quad(xx), t2 = b_mat.quad(xy), t3 = a_mat.quad(yx), t4 = b_mat.quad(yy);
  TraceGapReport rep;
  rep.lhs = a * (t1 - t2) + b * (t3 - t4);
  rep.n33 = n.a33;
  const double d1 = x.x1 - y.x1, d2 = x.x2 - y.x2;
  // X(x) - X(y) = (0, 0, 2(x2 - y2)), Y(x) - Y(y) = (0, 0, -2(x1 - y1)).
  rep.rhs = 4.0 * (a * d2 * d2 + b * d1 * d1) * rep.n33;
  rep.scale = a * (std::abs(t1) + std::abs(t2)) + b * (std::abs(t3) + std::abs(t4)) + std::abs(rep.rhs);
  rep.holds = rep.lhs <= rep.rhs + 1e-9 * rep.scale;
  return rep;
}

TraceGapReport lifted_trace_gap(const Sym3& a_mat, const Sym3& b_mat, const Sym3& n, const Point& x,
                                const Point& y, const PenaltyParams* pp, std::optional<double> c2) {
  if (!block_holds(a_mat, b_mat, n)) throw std::invalid_argument("lifted_trace_gap: block inequality does not hold");
  const Sym3 px = p_matrix(x), py = p_matrix(y);
  TraceGapReport rep;
  rep.lhs = trace(multiply(px, a_mat)) - trace(multiply(py, b_mat));
  rep.n33 = n.a33;
  const double dsq = (sqrt_p(x) - sqrt_p(y)).frobenius();
  rep.rhs = 3.0 * spectral_norm(n) * dsq * dsq;
  const double base = abs_dot(px, a_mat) + abs_dot(py, b_mat);
  rep.scale = base + std::abs(rep.rhs);
  rep.holds = rep.lhs <= rep.rhs + 1e-9 * rep.scale;
  if (pp) {
    const double ratio = c2 ? *c2 : (horizontal_distance(x, y) > 0.0 ? sqrtp_ratio(x, y) : 0.0);
    const double r = distance(x, y);
    const double bound = pp->L * pp->alpha * std::pow(r, pp->alpha) +
                         (2.0 / pp->mu) * pp->L * pp->L * pp->alpha * pp->alpha * std::pow(r, 2.0 * pp->alpha - 2.0);
    rep.c2 = ratio;
    rep.rhs_penalty = 3.0 * ratio * ratio * bound;
    rep.holds_penalty = rep.lhs <= *rep.rhs_penalty + 1e-9 * (base + std::abs(*rep.rhs_penalty));
  }
  return rep;
}

double sqrtp_ratio(const Point& x, const Point& y) {
  const double h = horizontal_distance(x, y);
  if (!(h > 0.0)) throw std::invalid_argument("sqrtp_ratio: x' and y' coincide");
  return (sqrt_p(x) - sqrt_p(y)).frobenius() / h;
}

SqrtpRatioSurvey survey_sqrtp_ratio(std::size_t samples, double gamma, double radius, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("survey_sqrtp_ratio: gamma must lie in (0, 1)");
  if (!(radius > 0.0)) throw std::invalid_argument("survey_sqrtp_ratio: radius must be positive");
  constexpr double kTwoPi = 6.283185307179586;
  SqrtpRatioSurvey out;
  out.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    SplitMix64 rng = SplitMix64::for_trial(seed, i);
    for (;;) {
      const double rho = rng.log_uniform(1e-2 * std::min(1.0, radius), radius);
      const double phi = rng.uniform(0.0, kTwoPi);
      const double x3 = rng.uniform(-radius, radius);
      const Point x{rho * std::cos(phi), rho * std::sin(phi), x3};
      const double d = rng.log_uniform(gamma * 1.000001, 1.0 / (gamma * 1.000001));
      const Vec3 u = random_unit_vector(rng);
      const Point y = to_point(to_vec(x) + d * u);
      if (std::hypot(y.x1, y.x2) > radius || !(horizontal_distance(x, y) > 0.0)) continue;
      const double r = sqrtp_ratio(x, y);
      if (r > out.max_ratio) {
        out.max_ratio = r;
        out.argmax_x = x;
        out.argmax_y = y;
      }
      break;
    }
  }
  return out;
}

bool psd_sandwich_check(const Sym3& p, const Sym3& s1, const Sym3& s2) {
  const double ps = p.max_abs_entry();
  if (eigenvalues(p)[0] < -1e-9 * ps) throw std::invalid_argument("psd_sandwich_check: P is not positive semidefinite");
  const Sym3 gap = s2 - s1;
  if (eigenvalues(gap)[0] < -1e-9 * std::max(s1.max_abs_entry(), s2.max_abs_entry()))
    throw std::invalid_argument("psd_sandwich_check: S1 <= S2 does not hold");
  const Sym3 lo = congruence(p, s1), hi = congruence(p, s2);
  const double scale = std::max(lo.max_abs_entry(), hi.max_abs_entry());
  return eigenvalues(hi - lo)[0] >= -1e-9 * scale;
}

bool vertical_obstruction_check(const Point& x, const Point& y, std::size_t samples, std::uint64_t seed) {
  if (x.x1 != 0.0 || x.x2 != 0.0 || y.x1 != 0.0 || y.x2 != 0.0)
    throw std::invalid_argument("vertical_obstruction_check: points must lie on the vertical axis");
  if (x.x3 == y.x3) throw std::invalid_argument("vertical_obstruction_check: x3 and y3 coincide");
  const Sym3 sx = sqrt_p(x), sy = sqrt_p(y);
  for (std::size_t i = 0; i < samples; ++i) {
    SplitMix64 rng = SplitMix64::for_trial(seed, i);
    const double s1 = rng.log_uniform(1e-3, 1e3);
    const double s2 = rng.log_uniform(1e-3, 1e3);
    const Vec3 xi1 = s1 * random_unit_vector(rng);
    const Vec3 xi2 = s2 * random_unit_vector(rng);
    const Vec3 d = sx.apply(xi1) - sy.apply(xi2);
    if (d[2] != 0.0) return false;
    if (d[0] == 0.0 && d[1] == 0.0 && std::abs(d[2]) == 1.0) return false;
  }
  return true;
}

bool vertical_obstruction_check(double x3, double y3, std::size_t samples, std::uint64_t seed) {
  return vertical_obstruction_check(Point{0.0, 0.0, x3}, Point{0.0, 0.0, y3}, samples, seed);
}

namespace {

struct Sample {
  Point p;
  double u;
  double quad;  // delta |p|²
};

struct Best {
  double theta = -std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
};

// Max of psi over xs × ys; ties keep the lexicographically smallest (i, j), so
// the result does not depend on how the outer loop is partitioned.
Best maximize(const std::vector<Sample>& xs, const std::vector<Sample>& ys, const PenaltyParams& pp) {
  const std::ptrdiff_t nx = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<Best> rows(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    Best b;
    const Sample& x = xs[i];
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const Sample& y = ys[j];
      const double d = distance(x.p, y.p);
      const double psi = x.u - y.u - pp.L * std::pow(d, pp.alpha) - x.quad - pp.eps;
      if (psi > b.theta) b = {psi, static_cast<std::size_t>(i), j};
    }
    rows[i] = b;
  }
  Best best;
  for (const Best& b : rows)
    if (b.theta > best.theta) best = b;
  return best;
}

void check_box(const CertificateBox& box) {
  if (!(box.upper.x1 >= box.lower.x1 && box.upper.x2 >= box.lower.x2 && box.upper.x3 >= box.lower.x3))
    throw std::invalid_argument("doubling_certificate: box upper corner below lower corner");
  if (box.samples_per_axis < 2) throw std::invalid_argument("doubling_certificate: need at least 2 samples per axis");
  if (box.refine_factor < 1) throw std::invalid_argument("doubling_certificate: refine factor must be >= 1");
}

Sample make_sample(const Point& p, double u, const PenaltyParams& pp) {
  if (!std::isfinite(u)) throw std::domain_error("doubling_certificate: non-finite sample of u");
  return {p, u, pp.delta * dot(to_vec(p), to_vec(p))};
}

void absorb(MaxReport& rep, const Best& b, const std::vector<Sample>& xs, const std::vector<Sample>& ys) {
  if (b.theta > rep.theta) {
    rep.theta = b.theta;
    rep.x_hat = xs[b.i].p;
    rep.y_hat = ys[b.j].p;
  }
  rep.pairs += xs.size() * ys.size();
}

void finish(MaxReport& rep) {
  rep.gap = distance(rep.x_hat, rep.y_hat);
  rep.certified = rep.theta <= 0.0;
}

}  // namespace

MaxReport doubling_certificate(const ScalarField& u, const PenaltyParams& pp, const CertificateBox& box) {
  pp.validate();
  check_box(box);
  const std::array<double, 3> lo{box.lower.x1, box.lower.x2, box.lower.x3};
  const std::array<double, 3> hi{box.upper.x1, box.upper.x2, box.upper.x3};
  const int n = box.samples_per_axis;
  std::array<double, 3> h{};
  for (int a = 0; a < 3; ++a) h[a] = (hi[a] - lo[a]) / (n - 1);

  auto lattice = [&](std::array<double, 3> start, std::array<double, 3> step, std::array<int, 3> count) {
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(count[0]) * count[1] * count[2]);
    for (int i = 0; i < count[0]; ++i)
      for (int j = 0; j < count[1]; ++j)
        for (int k = 0; k < count[2]; ++k) {
          const Point p{start[0] + i * step[0], start[1] + j * step[1], start[2] + k * step[2]};
          out.push_back(make_sample(p, u(p), pp));
        }
    return out;
  };

  MaxReport rep;
  rep.theta = -std::numeric_limits<double>::infinity();
  const std::vector<Sample> coarse = lattice(lo, h, {n, n, n});
  absorb(rep, maximize(coarse, coarse, pp), coarse, coarse);

  if (box.refine_factor > 1) {
    const int m = box.refine_factor;
    // Window of one coarse spacing around the incumbent, clipped to the box.
    auto window = [&](const Point& c) {
      const std::array<double, 3> cv{c.x1, c.x2, c.x3};
      std::array<double, 3> start{}, step{};
      std::array<int, 3> count{};
      for (int a = 0; a < 3; ++a) {
        step[a] = h[a] / m;
        const double from = std::max(lo[a], cv[a] - h[a]);
        const double to = std::min(hi[a], cv[a] + h[a]);
        start[a] = from;
        count[a] = step[a] > 0.0 ? static_cast<int>(std::floor((to - from) / step[a] + 1e-9)) + 1 : 1;
      }
      return lattice(start, step, count);
    };
    const std::vector<Sample> xs = window(rep.x_hat);
    const std::vector<Sample> ys = window(rep.y_hat);
    absorb(rep, maximize(xs, ys, pp), xs, ys);
  }
  finish(rep);
  return rep;
}

MaxReport doubling_certificate(const GridFunction& u, const PenaltyParams& pp, const CertificateBox& box) {
  pp.validate();
  check_box(box);
  const Grid3& g = u.grid();
  const std::array<double, 3> lo{box.lower.x1, box.lower.x2, box.lower.x3};
  const std::array<double, 3> hi{box.upper.x1, box.upper.x2, box.upper.x3};
  std::array<int, 3> first{}, last{}, stride{};
  for (int a = 0; a < 3; ++a) {
    const double h = g.spacing()[a];
    const double base = g.coord(a, 0);
    first[a] = std::max(0, static_cast<int>(std::ceil((lo[a] - base) / h - 1e-9)));
    last[a] = std::min(g.counts()[a] - 1, static_cast<int>(std::floor((hi[a] - base) / h + 1e-9)));
    if (last[a] < first[a]) throw std::invalid_argument("doubling_certificate: box contains no grid nodes");
    const int span = last[a] - first[a];
    stride[a] = std::max(1, (span + box.samples_per_axis - 2) / (box.samples_per_axis - 1));
  }

  auto collect = [&](std::array<int, 3> from, std::array<int, 3> to, std::array<int, 3> step) {
    std::vector<Sample> out;
    for (int i = from[0]; i <= to[0]; i += step[0])
      for (int j = from[1]; j <= to[1]; j += step[1])
        for (int k = from[2]; k <= to[2]; k += step[2]) out.push_back(make_sample(g.point(i, j, k), u.at(i, j, k), pp));
    return out;
  };

  MaxReport rep;
  rep.theta = -std::numeric_limits<double>::infinity();
  const std::vector<Sample> coarse = collect(first, last, stride);
  absorb(rep, maximize(coarse, coarse, pp), coarse, coarse);

  std::array<int, 3> fine{};
  bool refine = false;
  for (int a = 0; a < 3; ++a) {
    fine[a] = std::max(1, stride[a] / box.refine_factor);
    refine = refine || fine[a] < stride[a];
  }
  if (refine) {
    auto window = [&](const Point& c) {
      const std::array<double, 3> cv{c.x1, c.x2, c.x3};
      std::array<int, 3> from{}, to{};
      for (int a = 0; a < 3; ++a) {
        const int center = g.nearest(a, cv[a]);
        from[a] = std::max(first[a], center - stride[a]);
        to[a] = std::min(last[a], center + stride[a]);
      }
      return collect(from, to, fine);
    };
    const std::vector<Sample> xs = window(rep.x_hat);
    const std::vector<Sample> ys = window(rep.y_hat);
    absorb(rep, maximize(xs, ys, pp), xs, ys);
  }
  finish(rep);
  return rep;
}

CertificateThresholds certificate_thresholds(const HolderData& hd, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("certificate_thresholds: L must be positive");
  CertificateThresholds t;
  t.c0 = hd.c0;
  t.c0_above_8 = hd.c0 > 8.0;
  t.lipschitz_ratio = hd.L_f / L + hd.L_c / L;
  t.c0_above_lipschitz_ratio = hd.c0 > t.lipschitz_ratio;
  return t;
}

}  // namespace heis
