#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "heis/config.hpp"

using namespace heis;

namespace {

Json parse(const char* text) { return Json::parse(text); }

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

Json base_solve() {
  return parse(R"({"operator": {"kind": "sublaplacian"}, "f": "x1", "boundary": 0,
                   "grid": {"lower": [-1, -1, -1], "upper": [1, 1, 1], "n": 5}})");
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("field forms") {
    CHECK(field_from_json(parse("2.5"), "c")({1, 2, 3}) == 2.5);
    CHECK(field_from_json(parse(R"("x1^2 + x3")"), "c")({2, 0, 1}) == 5.0);
    const ScalarField f = field_from_json(
        parse(R"({"kind": "norm_power", "coefficient": 2, "power": 1, "smoothing": 0, "add": "x1"})"), "f");
    CHECK(f({3, 4, 0}) == doctest::Approx(13.0));
    CHECK(message_of([] { field_from_json(parse(R"({"kind": "norm_power"})"), "f"); }) == "f: missing field 'power'");
    CHECK(message_of([] { field_from_json(parse(R"({"kind": "bump", "power": 1})"), "f"); }).find("bump") != std::string::npos);
    CHECK(message_of([] { field_from_json(parse(R"("x1 +")"), "f"); }).rfind("f: ", 0) == 0);
  }

  TEST_CASE("operators") {
    const OperatorSpec p = operator_from_json(parse(R"({"kind": "pucci_minus", "lambda": 0.5, "Lambda": 3, "form": "lifted"})"));
    CHECK(p.kind() == OperatorKind::PucciMinus);
    CHECK(p.form() == OperatorForm::Lifted);
    CHECK(p.bracket().Lam == 3.0);
    const OperatorSpec t = operator_from_json(parse(R"({"kind": "trace_linear", "lambda": 1, "Lambda": 2, "coefficient": [[1.5, 0.2], [0.2, 1.2]]})"));
    CHECK(t.coefficient2() == Sym2{1.5, 0.2, 1.2});
    CHECK(operator_from_json(operator_to_json(t)).coefficient2() == t.coefficient2());
    CHECK(message_of([] { operator_from_json(parse(R"({"kind": "pucci_plus", "lambda": 2, "Lambda": 1})")); }) != "");
    CHECK(message_of([] { operator_from_json(parse(R"({"kind": "trace_linear", "coefficient": [[5, 0], [0, 1]], "Lambda": 2})")); }) != "");
    CHECK(message_of([] { operator_from_json(parse(R"({"kind": "sublaplacian", "scale": 2})")); }) ==
          "operator: unknown key 'scale'");
  }

  TEST_CASE("solve configs") {
    const SolveConfig s = solve_config_from_json(base_solve());
    CHECK(s.problem.grid.counts() == std::array<int, 3>{5, 5, 5});
    CHECK(s.problem.tol == 1e-6);
    Json j = base_solve();
    j.erase("grid");
    CHECK(message_of([&] { solve_config_from_json(j); }) == "config: missing field 'grid'");
    j = base_solve();
    j["extra"] = 1;
    CHECK(message_of([&] { solve_config_from_json(j); }) == "config: unknown key 'extra'");
    j = base_solve();
    j["max_iters"] = 0;
    CHECK(message_of([&] { solve_config_from_json(j); }).find("max_iters") != std::string::npos);
    j = base_solve();
    j.erase("f");
    j.erase("boundary");
    j["manufactured"] = "x1^2 + x2^2";
    const SolveConfig m = solve_config_from_json(j);
    REQUIRE(m.exact.has_value());
    CHECK(m.problem.f({1, 1, 0}) == doctest::Approx(4.0 - 2.0));
  }

  TEST_CASE("pipeline configs enforce c >= c0 > 0") {
    Json j = base_solve();
    j["holder"] = parse(R"({"c0": 1})");
    CHECK_NOTHROW(pipeline_config_from_json(j));
    j["holder"]["c0"] = 0;
    CHECK(message_of([&] { pipeline_config_from_json(j); }).find("c0") != std::string::npos);
    j["holder"]["c0"] = 2;
    CHECK(message_of([&] { pipeline_config_from_json(j); }).find("c0") != std::string::npos);
    j["holder"]["c0"] = 1;
    j["sampling"] = parse(R"({"margin": 0.6})");
    CHECK(message_of([&] { pipeline_config_from_json(j); }).find("margin") != std::string::npos);
  }

  TEST_CASE("CSV round trip is bit-exact") {
    const Grid3 g = Grid3::box({-1, -0.5, 0}, {1, 0.5, 3}, {5, 4, 3});
    GridFunction u(g);
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::sin(1.0 + i) / 3.0;
    const std::string path = (std::filesystem::temp_directory_path() / "heis_roundtrip.csv").string();
    write_csv(u, path);
    const GridFunction v = read_csv(path);
    CHECK(v.grid().counts() == g.counts());
    CHECK(v.values() == u.values());
    std::ofstream(path) << "x1,x2,x3,u\n0,0,0,1\n0,0,oops,1\n";
    CHECK_THROWS_AS(read_csv(path), ConfigError);
    std::remove(path.c_str());
  }

  TEST_CASE("doubles print with 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
  }
}
