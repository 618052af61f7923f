#pragma once

// JSON configuration and CSV field I/O for the command-line tools.
//
// Scalar fields are written as
//   "x1^2 + x2^2"                       polynomial
//   0.5                                 constant
//   {"kind": "norm_power", "coefficient": c, "power": p, "smoothing": s, "add": "..."}
//                                       c (|x|² + s²)^{p/2} + add
// Unknown keys anywhere are errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "heis/grid.hpp"
#include "heis/regularity.hpp"
#include "heis/solver.hpp"

namespace heis {

using Json = nlohmann::ordered_json;

/// Malformed configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load_json(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json(const Json& j, const std::string& path);

ScalarField field_from_json(const Json& j, const std::string& where);
OperatorSpec operator_from_json(const Json& j);
Json operator_to_json(const OperatorSpec& op);
Grid3 grid_from_json(const Json& j);
Json grid_to_json(const Grid3& g);
HolderData holder_from_json(const Json& j);
Json holder_to_json(const HolderData& hd);

struct SolveConfig {
  ProblemSpec problem;
  Acceleration acceleration = Acceleration::Nesterov;
  std::optional<ScalarField> exact;  // known solution, for error reporting
};

/// Keys: operator, c, f | manufactured, boundary, grid, tol, max_iters, acceleration, exact.
/// "manufactured": u* sets f = F(D^{2,*}u*) - c u*, and defaults boundary and exact to u*.
SolveConfig solve_config_from_json(const Json& j);

struct CertificateConfig {
  int samples_per_axis = 17;
  int refine_factor = 4;
  double delta = 1e-6;
  double eps = 1e-6;
  double L_factor = 1.1;  // L = L_factor * fine-grid seminorm at alpha_target
};

struct PipelineConfig {
  SolveConfig solve;  // grid is the coarse grid; the fine grid has 2n - 1 nodes per axis
  HolderData holder;
  SamplingOptions sampling;
  CertificateConfig certificate;
};

/// Solve keys plus holder, seed, sampling {margin, pairs}, certificate {...}.
/// Rejects c0 <= 0 and c below c0 at any coarse-grid node.
PipelineConfig pipeline_config_from_json(const Json& j);

/// Config for the holder command: operator (for Lambda), holder, seed, sampling.
struct HolderConfig {
  EllipticityBracket bracket;
  HolderData holder;
  SamplingOptions sampling;
};
HolderConfig holder_config_from_json(const Json& j);

/// %.17g
std::string format_double(double v);
/// Header x1,x2,x3,u; one row per node in storage order (x3 fastest).
void write_csv(const GridFunction& u, const std::string& path);
/// Reconstructs the grid from the coordinates; throws ConfigError on a malformed or non-uniform file.
GridFunction read_csv(const std::string& path);

}  // namespace heis
