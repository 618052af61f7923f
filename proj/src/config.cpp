#include "heis/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace heis {

namespace {

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const Json& field(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": expected a finite number");
  return v;
}

double number_or(const Json& j, const std::string& where, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), join(where, key)) : fallback;
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::string string_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

Point point_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected an array of 3 numbers");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
}

Polynomial parse_polynomial(const std::string& text, const std::string& where) {
  try {
    return Polynomial::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

ScalarField field_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return ScalarField::constant(number(j, where));
  if (j.is_string()) return ScalarField::polynomial(parse_polynomial(j.get<std::string>(), where));
  if (!j.is_object()) throw ConfigError(where + ": expected a polynomial string, a number or an object");
  check_keys(j, where, {"kind", "coefficient", "power", "smoothing", "add"});
  const std::string kind = string_field(field(j, where, "kind"), join(where, "kind"));
  if (kind != "norm_power") throw ConfigError(join(where, "kind") + ": unknown field kind '" + kind + "'");
  const double coef = number_or(j, where, "coefficient", 1.0);
  const double power = number(field(j, where, "power"), join(where, "power"));
  const double smoothing = number_or(j, where, "smoothing", 0.0);
  if (!(power > 0.0)) throw ConfigError(join(where, "power") + ": must be positive");
  if (!(smoothing >= 0.0)) throw ConfigError(join(where, "smoothing") + ": must be nonnegative");
  const Polynomial add = j.contains("add") ? parse_polynomial(string_field(j.at("add"), join(where, "add")), join(where, "add"))
                                           : Polynomial();
  const double s2 = smoothing * smoothing;
  std::string label = format_double(coef) + " * (|x|^2 + " + format_double(s2) + ")^(" + format_double(power) + "/2)";
  if (!add.is_zero()) label += " + " + add.to_string();
  return ScalarField::function(
      [coef, power, s2, add](const Point& p) {
        const double r2 = p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3 + s2;
        return coef * std::pow(r2, 0.5 * power) + add(p);
      },
      kDefaultFdStep, label);
}

OperatorSpec operator_from_json(const Json& j) {
  const std::string w = "operator";
  check_keys(j, w, {"kind", "lambda", "Lambda", "form", "coefficient"});
  const std::string kind = string_field(field(j, w, "kind"), "operator.kind");
  OperatorForm form = OperatorForm::Intrinsic;
  if (j.contains("form")) {
    const std::string f = string_field(j.at("form"), "operator.form");
    if (f == "intrinsic") form = OperatorForm::Intrinsic;
    else if (f == "lifted") form = OperatorForm::Lifted;
    else throw ConfigError("operator.form: expected 'intrinsic' or 'lifted'");
  }
  const double lam = number_or(j, w, "lambda", 1.0);
  const double Lam = number_or(j, w, "Lambda", 1.0);
  EllipticityBracket b;
  try {
    b = EllipticityBracket::make(lam, Lam);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("operator: ") + e.what());
  }
  if (kind != "trace_linear" && j.contains("coefficient"))
    throw ConfigError("operator.coefficient: only trace_linear takes a coefficient");
  try {
    if (kind == "sublaplacian") {
      if (j.contains("lambda") || j.contains("Lambda"))
        throw ConfigError("operator: sublaplacian has the fixed bracket lambda = Lambda = 1");
      return OperatorSpec::sublaplacian(form);
    }
    if (kind == "pucci_plus") return OperatorSpec::pucci_plus(b, form);
    if (kind == "pucci_minus") return OperatorSpec::pucci_minus(b, form);
    if (kind == "trace_linear") {
      const Json& a = field(j, w, "coefficient");
      if (!a.is_array()) throw ConfigError("operator.coefficient: expected a square array");
      auto entry = [&](std::size_t r, std::size_t c) {
        if (!a[r].is_array() || a[r].size() != a.size()) throw ConfigError("operator.coefficient: expected a square array");
        return number(a[r][c], "operator.coefficient");
      };
      if (a.size() == 2) {
        if (form != OperatorForm::Intrinsic) throw ConfigError("operator.coefficient: a 2x2 coefficient needs the intrinsic form");
        if (entry(0, 1) != entry(1, 0)) throw ConfigError("operator.coefficient: not symmetric");
        return OperatorSpec::trace_linear(Sym2{entry(0, 0), entry(0, 1), entry(1, 1)}, b);
      }
      if (a.size() == 3) {
        if (form != OperatorForm::Lifted) throw ConfigError("operator.coefficient: a 3x3 coefficient needs the lifted form");
        for (std::size_t r = 0; r < 3; ++r)
          for (std::size_t c = r + 1; c < 3; ++c)
            if (entry(r, c) != entry(c, r)) throw ConfigError("operator.coefficient: not symmetric");
        return OperatorSpec::trace_linear(
            Sym3{entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2), entry(2, 2)}, b);
      }
      throw ConfigError("operator.coefficient: expected a 2x2 or 3x3 array");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("operator: ") + e.what());
  }
  throw ConfigError("operator.kind: unknown operator '" + kind + "'");
}

Json operator_to_json(const OperatorSpec& op) {
  Json j;
  j["kind"] = to_string(op.kind());
  if (op.kind() != OperatorKind::SubLaplacian) {
    j["lambda"] = op.bracket().lam;
    j["Lambda"] = op.bracket().Lam;
  }
  j["form"] = to_string(op.form());
  if (op.kind() == OperatorKind::TraceLinear) {
    if (op.form() == OperatorForm::Intrinsic) {
      const Sym2& a = op.coefficient2();
      j["coefficient"] = Json::array({Json::array({a.xx, a.xy}), Json::array({a.xy, a.yy})});
    } else {
      const Sym3& a = op.coefficient3();
      j["coefficient"] = Json::array({Json::array({a.a11, a.a12, a.a13}), Json::array({a.a12, a.a22, a.a23}),
                                      Json::array({a.a13, a.a23, a.a33})});
    }
  }
  return j;
}

Grid3 grid_from_json(const Json& j) {
  const std::string w = "grid";
  check_keys(j, w, {"lower", "upper", "n"});
  const Point lo = point_from_json(field(j, w, "lower"), "grid.lower");
  const Point hi = point_from_json(field(j, w, "upper"), "grid.upper");
  const Json& n = field(j, w, "n");
  std::array<int, 3> counts{};
  if (n.is_array()) {
    if (n.size() != 3) throw ConfigError("grid.n: expected an integer or 3 integers");
    for (int a = 0; a < 3; ++a) counts[a] = static_cast<int>(integer(n[a], "grid.n"));
  } else {
    counts.fill(static_cast<int>(integer(n, "grid.n")));
  }
  try {
    return Grid3::box(lo, hi, counts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

Json grid_to_json(const Grid3& g) {
  const Point lo = g.lower(), hi = g.upper();
  Json j;
  j["lower"] = Json::array({lo.x1, lo.x2, lo.x3});
  j["upper"] = Json::array({hi.x1, hi.x2, hi.x3});
  j["n"] = Json::array({g.counts()[0], g.counts()[1], g.counts()[2]});
  return j;
}

HolderData holder_from_json(const Json& j) {
  const std::string w = "holder";
  check_keys(j, w, {"c0", "beta", "beta_prime", "L_c", "L_f"});
  HolderData hd;
  hd.c0 = number(field(j, w, "c0"), "holder.c0");
  hd.beta = number_or(j, w, "beta", 1.0);
  hd.beta_prime = number_or(j, w, "beta_prime", 1.0);
  hd.L_c = number_or(j, w, "L_c", 0.0);
  hd.L_f = number_or(j, w, "L_f", 0.0);
  try {
    hd.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return hd;
}

Json holder_to_json(const HolderData& hd) {
  Json j;
  j["c0"] = hd.c0;
  j["beta"] = hd.beta;
  j["beta_prime"] = hd.beta_prime;
  j["L_c"] = hd.L_c;
  j["L_f"] = hd.L_f;
  return j;
}

namespace {

SolveConfig solve_section(const Json& j) {
  SolveConfig cfg;
  ProblemSpec& p = cfg.problem;
  p.op = operator_from_json(field(j, "config", "operator"));
  p.c = j.contains("c") ? field_from_json(j.at("c"), "c") : ScalarField::constant(1.0);
  p.grid = grid_from_json(field(j, "config", "grid"));
  if (j.contains("f") && j.contains("manufactured")) throw ConfigError("give either 'f' or 'manufactured', not both");
  if (j.contains("manufactured")) {
    const ScalarField u = field_from_json(j.at("manufactured"), "manufactured");
    if (!u.is_polynomial()) throw ConfigError("manufactured: the manufactured solution must be a polynomial");
    p.f = manufacture(u, p.op, p.c);
    p.boundary = u;
    cfg.exact = u;
  } else {
    p.f = field_from_json(field(j, "config", "f"), "f");
  }
  if (j.contains("boundary")) p.boundary = field_from_json(j.at("boundary"), "boundary");
  else if (!j.contains("manufactured")) throw ConfigError("missing field 'boundary'");
  if (j.contains("exact")) cfg.exact = field_from_json(j.at("exact"), "exact");
  p.tol = number_or(j, "", "tol", 1e-6);
  if (j.contains("max_iters")) {
    const std::int64_t m = integer(j.at("max_iters"), "max_iters");
    if (m <= 0) throw ConfigError("max_iters: must be positive");
    p.max_iters = static_cast<std::size_t>(m);
  }
  if (j.contains("acceleration")) {
    const std::string a = string_field(j.at("acceleration"), "acceleration");
    if (a == "nesterov") cfg.acceleration = Acceleration::Nesterov;
    else if (a == "none") cfg.acceleration = Acceleration::None;
    else throw ConfigError("acceleration: expected 'nesterov' or 'none'");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

SamplingOptions sampling_section(const Json& j) {
  SamplingOptions s;
  if (j.contains("seed")) {
    const std::int64_t seed = integer(j.at("seed"), "seed");
    if (seed < 0) throw ConfigError("seed: must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("sampling")) {
    const Json& sj = j.at("sampling");
    check_keys(sj, "sampling", {"margin", "pairs"});
    s.margin = number_or(sj, "sampling", "margin", s.margin);
    if (!(s.margin >= 0.0 && s.margin < 0.5)) throw ConfigError("sampling.margin: must lie in [0, 0.5)");
    if (sj.contains("pairs")) {
      const std::int64_t n = integer(sj.at("pairs"), "sampling.pairs");
      if (n <= 0) throw ConfigError("sampling.pairs: must be positive");
      s.pairs = static_cast<std::size_t>(n);
    }
  }
  return s;
}

}  // namespace

SolveConfig solve_config_from_json(const Json& j) {
  check_keys(j, "config", {"operator", "c", "f", "manufactured", "boundary", "grid", "tol", "max_iters",
                           "acceleration", "exact"});
  return solve_section(j);
}

PipelineConfig pipeline_config_from_json(const Json& j) {
  check_keys(j, "config", {"operator", "c", "f", "manufactured", "boundary", "grid", "tol", "max_iters",
                           "acceleration", "exact", "holder", "seed", "sampling", "certificate"});
  PipelineConfig cfg;
  cfg.holder = holder_from_json(field(j, "config", "holder"));
  cfg.solve = solve_section(j);
  cfg.sampling = sampling_section(j);
  const Grid3& g = cfg.solve.problem.grid;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double cv = cfg.solve.problem.c(g.point(idx));
    if (cv < cfg.holder.c0)
      throw ConfigError("holder.c0: c falls below c0 at grid node " + std::to_string(idx) + " (c = " + format_double(cv) + ")");
  }
  if (j.contains("certificate")) {
    const Json& cj = j.at("certificate");
    check_keys(cj, "certificate", {"samples_per_axis", "refine_factor", "delta", "eps", "L_factor"});
    CertificateConfig& c = cfg.certificate;
    if (cj.contains("samples_per_axis")) c.samples_per_axis = static_cast<int>(integer(cj.at("samples_per_axis"), "certificate.samples_per_axis"));
    if (cj.contains("refine_factor")) c.refine_factor = static_cast<int>(integer(cj.at("refine_factor"), "certificate.refine_factor"));
    c.delta = number_or(cj, "certificate", "delta", c.delta);
    c.eps = number_or(cj, "certificate", "eps", c.eps);
    c.L_factor = number_or(cj, "certificate", "L_factor", c.L_factor);
    if (c.samples_per_axis < 2 || c.refine_factor < 1 || !(c.delta >= 0.0) || !(c.eps >= 0.0) || !(c.L_factor > 0.0))
      throw ConfigError("certificate: out-of-range parameter");
  }
  return cfg;
}

HolderConfig holder_config_from_json(const Json& j) {
  check_keys(j, "config", {"operator", "holder", "seed", "sampling"});
  HolderConfig cfg;
  cfg.bracket = operator_from_json(field(j, "config", "operator")).bracket();
  cfg.holder = holder_from_json(field(j, "config", "holder"));
  cfg.sampling = sampling_section(j);
  return cfg;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const GridFunction& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "x1,x2,x3,u\n";
  const Grid3& g = u.grid();
  std::string line;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Point p = g.point(idx);
    line = format_double(p.x1);
    line += ',';
    line += format_double(p.x2);
    line += ',';
    line += format_double(p.x3);
    line += ',';
    line += format_double(u[idx]);
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

GridFunction read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("x1,x2,x3,u", 0) != 0)
    throw ConfigError(path + ": expected header 'x1,x2,x3,u'");
  std::vector<std::array<double, 4>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 4> row{};
    const char* s = line.data();
    const char* end = s + line.size();
    for (int c = 0; c < 4; ++c) {
      const auto [ptr, ec] = std::from_chars(s, end, row[c]);
      if (ec != std::errc() || (c < 3 && (ptr == end || *ptr != ',')) || (c == 3 && ptr != end))
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed row");
      s = ptr + 1;
    }
    rows.push_back(row);
  }
  std::array<std::vector<double>, 3> axes;
  for (int a = 0; a < 3; ++a) {
    std::set<double> distinct;
    for (const auto& r : rows) distinct.insert(r[a]);
    axes[a].assign(distinct.begin(), distinct.end());
    if (axes[a].size() < 3) throw ConfigError(path + ": every axis needs at least 3 distinct coordinates");
  }
  const std::array<int, 3> counts{static_cast<int>(axes[0].size()), static_cast<int>(axes[1].size()),
                                  static_cast<int>(axes[2].size())};
  if (rows.size() != static_cast<std::size_t>(counts[0]) * counts[1] * counts[2])
    throw ConfigError(path + ": row count does not match a full tensor grid");
  std::array<double, 3> h{};
  for (int a = 0; a < 3; ++a) {
    h[a] = (axes[a].back() - axes[a].front()) / (counts[a] - 1);
    for (int i = 0; i < counts[a]; ++i)
      if (std::abs(axes[a][i] - (axes[a].front() + i * h[a])) > 1e-9 * std::max(1.0, std::abs(axes[a][i])))
        throw ConfigError(path + ": coordinates are not uniformly spaced");
  }
  const Grid3 g({axes[0].front(), axes[1].front(), axes[2].front()}, counts, h);
  std::vector<double> values(g.size());
  std::vector<bool> seen(g.size(), false);
  for (const auto& r : rows) {
    const std::size_t idx = g.index(g.nearest(0, r[0]), g.nearest(1, r[1]), g.nearest(2, r[2]));
    if (seen[idx]) throw ConfigError(path + ": duplicate node");
    seen[idx] = true;
    values[idx] = r[3];
  }
  return GridFunction(g, std::move(values));
}

}  // namespace heis
