#pragma once

// Empirical Hölder regularity of grid functions: modulus of continuity,
// Hölder seminorm, log-log exponent fit, and the comparison against the
// exponent candidate min(beta, beta', 0.9 c0 / (2 Lambda)).
//
// All statistics use node pairs from the interior region (a margin of 10% of
// the box extent is dropped on every side to limit the influence of the
// artificial Dirichlet data) and Euclidean distances.

#include <cstdint>
#include <utility>
#include <vector>

#include "heis/grid.hpp"
#include "heis/operators.hpp"
#include "heis/solver.hpp"

namespace heis {

struct SamplingOptions {
  double margin = 0.1;         // fraction of the box extent excluded per side
  std::size_t pairs = 200000;  // node pairs, stratified by log-radius
  std::uint64_t seed = 0;
};

/// Node index range [first, last] per axis left after removing the margin.
struct InteriorRegion {
  std::array<int, 3> first{};
  std::array<int, 3> last{};
  double diameter = 0.0;  // Euclidean diameter of the region
};

InteriorRegion interior_region(const Grid3& g, double margin);

/// Node pairs (x, y) with |x - y| log-uniform between the smallest spacing and
/// the region diameter (y is the node nearest to x + r e for a random unit e).
/// Pair k depends only on (seed, k).
struct PairSample {
  std::vector<std::uint32_t> x, y;
  std::vector<double> dist;
  std::size_t size() const { return dist.size(); }
};

PairSample sample_pairs(const Grid3& g, const SamplingOptions& opts);

/// (r, omega_r) with omega_r = max |u(x) - u(y)| over sampled pairs with
/// |x - y| in [0.9 r, 1.1 r], then made non-decreasing in r.
/// Throws std::invalid_argument for fewer than 2 radii, nonpositive radii, or a
/// radius with no admissible pair.
std::vector<std::pair<double, double>> modulus(const GridFunction& u, std::vector<double> radii,
                                               const SamplingOptions& opts = {});

/// max over sampled pairs of |u(x) - u(y)| / |x - y|^alpha. alpha must lie in (0, 1].
double holder_seminorm(const GridFunction& u, double alpha, const SamplingOptions& opts = {});

struct PowerLawFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double r_squared = 0.0;
};

/// Least squares for log omega = log L + a log r over the points with omega > 0.
/// Throws std::invalid_argument with fewer than 2 such points or identical radii.
PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& points);

struct AlphaFit {
  double alpha = 1.0;  // slope clamped to (0, 1.5]
  double L = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;  // every omega_r vanished: alpha = 1, L = 0
  std::vector<std::pair<double, double>> modulus;
};

/// Default radii: 12 log-spaced values in [2h, diameter / 4].
std::vector<double> default_radii(const Grid3& g, double margin, int count = 12);
AlphaFit fit_alpha(const GridFunction& u, const SamplingOptions& opts = {});

/// c0 / (2 Lambda), the ceiling on alpha from the comparison argument.
double theorem_bound(const HolderData& hd, double Lambda);
/// min(beta, beta', 0.9 c0 / (2 Lambda))
double alpha_target(const HolderData& hd, double Lambda);

struct HolderReport {
  double alpha_fit = 1.0;
  double L_fit = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;
  double seminorm_at_target = 0.0;  // fine grid
  double seminorm_coarse = 0.0;
  double seminorm_change = 0.0;  // |fine - coarse| / max(fine, coarse)
  double alpha_target = 0.0;
  double bound_c0_2Lambda = 0.0;
  double margin = 0.1;
  std::size_t pairs = 0;
  std::vector<std::pair<double, double>> modulus;  // fine grid
  bool pass = false;
};

/// pass = seminorm at alpha_target finite and changing by < 20% from coarse to
/// fine, and alpha_fit >= 0.8 alpha_target. Rejects (std::invalid_argument)
/// unconverged solves.
HolderReport check_theorem(const SolveResult& coarse, const SolveResult& fine, const HolderData& hd,
                           const EllipticityBracket& b, const SamplingOptions& opts = {});

}  // namespace heis
