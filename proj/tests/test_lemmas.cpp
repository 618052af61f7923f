#include "doctest.h"

#include <set>

#include "heis/lemmas.hpp"

using namespace heis;

TEST_SUITE("lemmas") {
  TEST_CASE("catalog covers the four property modules") {
    std::set<std::string> modules, ids;
    for (const LemmaInfo& l : lemma_catalog()) {
      modules.insert(l.module);
      ids.insert(l.id);
    }
    CHECK(modules == std::set<std::string>{"hgroup", "hcalculus", "hoperators", "sumslab"});
    CHECK(ids.size() == lemma_catalog().size());
  }

  TEST_CASE("filters") {
    CHECK(matches_filter({"pucci.duality", "hoperators"}, "hoperators"));
    CHECK(matches_filter({"pucci.duality", "hoperators"}, "pucci."));
    CHECK(matches_filter({"pucci.duality", "hoperators"}, ""));
    CHECK_FALSE(matches_filter({"pucci.duality", "hoperators"}, "sumslab"));
    CHECK_THROWS_AS(run_suite(0, "nothing"), std::invalid_argument);
    const auto r = run_suite(0, "pucci.duality");
    REQUIRE(r.size() == 1);
    CHECK(r[0].pass);
  }

  TEST_CASE("a check's trials do not depend on the filter") {
    const auto alone = run_suite(5, "penalty.square");
    const auto module = run_suite(5, "sumslab");
    for (const LemmaResult& r : module)
      if (r.id == "penalty.square") CHECK(r.worst_gap == alone[0].worst_gap);
  }

  TEST_CASE("random polynomials respect the degree bound") {
    SplitMix64 rng(1);
    for (int t = 0; t < 200; ++t) CHECK(random_polynomial(rng, 6, 8).degree() <= 6);
  }
}
