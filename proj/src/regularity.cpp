#include "heis/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "heis/random.hpp"

namespace heis {

InteriorRegion interior_region(const Grid3& g, double margin) {
  if (!(margin >= 0.0 && margin < 0.5)) throw std::invalid_argument("interior margin must lie in [0, 0.5)");
  InteriorRegion reg;
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const int cells = g.counts()[a] - 1;
    reg.first[a] = static_cast<int>(std::ceil(margin * cells - 1e-9));
    reg.last[a] = cells - reg.first[a];
    if (reg.last[a] <= reg.first[a]) throw std::invalid_argument("interior region is empty; grid too coarse for the margin");
    const double ext = (reg.last[a] - reg.first[a]) * g.spacing()[a];
    d2 += ext * ext;
  }
  reg.diameter = std::sqrt(d2);
  return reg;
}

PairSample sample_pairs(const Grid3& g, const SamplingOptions& opts) {
  const InteriorRegion reg = interior_region(g, opts.margin);
  const double rmin = std::min({g.spacing()[0], g.spacing()[1], g.spacing()[2]});
  const double rmax = reg.diameter;
  PairSample s;
  s.x.reserve(opts.pairs);
  s.y.reserve(opts.pairs);
  s.dist.reserve(opts.pairs);
  for (std::size_t k = 0; k < opts.pairs; ++k) {
    SplitMix64 rng = SplitMix64::for_trial(opts.seed, k);
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::array<int, 3> ix{};
      for (int a = 0; a < 3; ++a) ix[a] = reg.first[a] + static_cast<int>(rng.below(reg.last[a] - reg.first[a] + 1));
      const double r = rng.log_uniform(rmin, rmax);
      const Vec3 e = random_unit_vector(rng);
      const Point p = g.point(ix[0], ix[1], ix[2]);
      const Vec3 q = to_vec(p) + r * e;
      std::array<int, 3> iy{};
      bool ok = true;
      for (int a = 0; a < 3 && ok; ++a) {
        const double t = std::round((q[a] - g.coord(a, 0)) / g.spacing()[a]);
        ok = t >= reg.first[a] && t <= reg.last[a];
        if (ok) iy[a] = static_cast<int>(t);
      }
      if (!ok || iy == ix) continue;
      s.x.push_back(static_cast<std::uint32_t>(g.index(ix[0], ix[1], ix[2])));
      s.y.push_back(static_cast<std::uint32_t>(g.index(iy[0], iy[1], iy[2])));
      s.dist.push_back(distance(p, g.point(iy[0], iy[1], iy[2])));
      break;
    }
  }
  return s;
}

std::vector<std::pair<double, double>> modulus(const GridFunction& u, std::vector<double> radii,
                                               const SamplingOptions& opts) {
  if (radii.size() < 2) throw std::invalid_argument("modulus: need at least 2 radii");
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("modulus: radii must be positive");
  std::sort(radii.begin(), radii.end());
  const PairSample s = sample_pairs(u.grid(), opts);
  std::vector<double> omega(radii.size(), 0.0);
  std::vector<std::size_t> hits(radii.size(), 0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = s.dist[k];
    const double diff = std::abs(u[s.x[k]] - u[s.y[k]]);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (d >= 0.9 * radii[i] && d <= 1.1 * radii[i]) {
        omega[i] = std::max(omega[i], diff);
        ++hits[i];
      }
    }
  }
  std::vector<std::pair<double, double>> out;
  double running = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (hits[i] == 0) throw std::invalid_argument("modulus: no sampled pair near radius " + std::to_string(radii[i]));
    running = std::max(running, omega[i]);
    out.emplace_back(radii[i], running);
  }
  return out;
}

double holder_seminorm(const GridFunction& u, double alpha, const SamplingOptions& opts) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("holder_seminorm: alpha must lie in (0, 1]");
  const PairSample s = sample_pairs(u.grid(), opts);
  if (s.size() == 0) throw std::invalid_argument("holder_seminorm: empty pair sample");
  double best = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k)
    best = std::max(best, std::abs(u[s.x[k]] - u[s.y[k]]) / std::pow(s.dist[k], alpha));
  return best;
}

PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> lx, ly;
  for (const auto& [r, w] : points)
    if (r > 0.0 && w > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(w));
    }
  const std::size_t n = lx.size();
  if (n < 2) throw std::invalid_argument("power_law_fit: need at least 2 positive points");
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("power_law_fit: radii are identical");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.coefficient = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> default_radii(const Grid3& g, double margin, int count) {
  if (count < 2) throw std::invalid_argument("default_radii: need at least 2 radii");
  const InteriorRegion reg = interior_region(g, margin);
  const double h = std::min({g.spacing()[0], g.spacing()[1], g.spacing()[2]});
  const double lo = 2.0 * h, hi = reg.diameter / 4.0;
  if (!(hi > lo)) throw std::invalid_argument("default_radii: interior region too small for the radius range");
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return r;
}

AlphaFit fit_alpha(const GridFunction& u, const SamplingOptions& opts) {
  AlphaFit out;
  out.modulus = modulus(u, default_radii(u.grid(), opts.margin), opts);
  std::size_t positive = 0;
  for (const auto& [r, w] : out.modulus) positive += w > 0.0;
  if (positive < 2) {
    out.degenerate = true;
    out.alpha = 1.0;
    out.L = 0.0;
    out.r_squared = 0.0;
    return out;
  }
  const PowerLawFit fit = power_law_fit(out.modulus);
  out.alpha = std::clamp(fit.exponent, 1e-12, 1.5);
  out.L = fit.coefficient;
  out.r_squared = fit.r_squared;
  return out;
}

double theorem_bound(const HolderData& hd, double Lambda) {
  hd.validate();
  if (!(Lambda > 0.0)) throw std::invalid_argument("theorem_bound: Lambda must be positive");
  return hd.c0 / (2.0 * Lambda);
}

double alpha_target(const HolderData& hd, double Lambda) {
  return std::min({hd.beta, hd.beta_prime, 0.9 * theorem_bound(hd, Lambda)});
}

HolderReport check_theorem(const SolveResult& coarse, const SolveResult& fine, const HolderData& hd,
                           const EllipticityBracket& b, const SamplingOptions& opts) {
  if (!coarse.converged || !fine.converged) throw std::invalid_argument("check_theorem: solve did not converge");
  HolderReport rep;
  rep.bound_c0_2Lambda = theorem_bound(hd, b.Lam);
  rep.alpha_target = alpha_target(hd, b.Lam);
  rep.margin = opts.margin;
  rep.seminorm_coarse = holder_seminorm(coarse.u, rep.alpha_target, opts);
  rep.seminorm_at_target = holder_seminorm(fine.u, rep.alpha_target, opts);
  const double diff = std::abs(rep.seminorm_at_target - rep.seminorm_coarse);
  rep.seminorm_change = diff == 0.0 ? 0.0 : diff / std::max(rep.seminorm_at_target, rep.seminorm_coarse);
  const AlphaFit fit = fit_alpha(fine.u, opts);
  rep.alpha_fit = fit.alpha;
  rep.L_fit = fit.L;
  rep.r_squared = fit.r_squared;
  rep.degenerate = fit.degenerate;
  rep.modulus = fit.modulus;
  rep.pairs = opts.pairs;
  rep.pass = std::isfinite(rep.seminorm_at_target) && rep.seminorm_change < 0.2 &&
             rep.alpha_fit >= 0.8 * rep.alpha_target;
  return rep;
}

}  // namespace heis
