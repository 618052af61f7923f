#pragma once

// Command-line entry points. Exit codes: 0 success, 1 malformed config or I/O
// failure, 2 non-convergence, 3 a check ran to completion and failed.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "heis/config.hpp"

namespace heis {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitCheckFailed = 3;

struct VerifyArgs {
  std::string filter;
  std::uint64_t seed = 0;
  std::string out;  // JSON report; stdout when empty
};

struct SolveArgs {
  std::string config;
  std::string out;  // CSV; diagnostics go next to it as <stem>.diagnostics.json
};

struct HolderArgs {
  std::string grid;    // fine-grid CSV
  std::string config;
  std::string out;
  std::string coarse;  // optional coarse-grid CSV for the refinement check
};

struct PipelineArgs {
  std::string config;
  std::string out_dir;
  bool emit_plot_data = false;
};

Json verify_report(std::uint64_t seed, const std::string& filter);

/// Diagnostics path written next to a solve CSV.
std::string diagnostics_path(const std::string& csv_path);

struct PipelineOutcome {
  Json report;
  bool converged = false;
  bool pass = false;
  std::vector<std::pair<double, double>> modulus;  // fine grid (r, omega_r)
};

/// Solves on the configured grid and on its refinement (2n - 1 nodes per axis),
/// runs the regularity check and the doubling certificate, and merges everything
/// into one deterministic report. Non-convergence is reported, not thrown.
PipelineOutcome run_pipeline(const PipelineConfig& cfg);

int cmd_verify(const VerifyArgs& args, std::ostream& log);
int cmd_solve(const SolveArgs& args, std::ostream& log);
int cmd_holder(const HolderArgs& args, std::ostream& log);
int cmd_pipeline(const PipelineArgs& args, std::ostream& log);

/// Parses argv and dispatches; returns the exit code.
int run_cli(int argc, char** argv);

}  // namespace heis
