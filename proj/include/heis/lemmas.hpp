#pragma once

// Seeded property suite behind `heis verify`. Every check compares a library
// routine against an independent oracle (symbolic algebra, brute-force
// enumeration, finite differences, direct matrix products) and reports the
// worst error or scaled excess over its trials.

#include <cstdint>
#include <string>
#include <vector>

#include "heis/polynomial.hpp"
#include "heis/random.hpp"

namespace heis {

struct LemmaResult {
  std::string id;
  std::string module;
  std::size_t trials = 0;
  double worst_gap = 0.0;  // largest observed error or scaled excess
  double tolerance = 0.0;  // pass iff worst_gap <= tolerance (plus any check-specific condition)
  bool pass = false;
  std::string note;
};

struct LemmaInfo {
  std::string id;
  std::string module;
};

/// Every check in run order.
std::vector<LemmaInfo> lemma_catalog();

/// A filter selects a whole module ("sumslab") or ids with that prefix ("pucci."). Empty selects all.
bool matches_filter(const LemmaInfo& info, const std::string& filter);

/// Runs the selected checks. Throws std::invalid_argument when the filter selects nothing.
std::vector<LemmaResult> run_suite(std::uint64_t seed, const std::string& filter = "");

/// Integer coefficients in [-5, 5], total degree <= max_degree, 1..max_terms terms.
Polynomial random_polynomial(SplitMix64& rng, int max_degree, int max_terms);

}  // namespace heis
