#pragma once

// Command-line front end: data generation, single solves, the constants
// calculator and the table grid. Everything the `dtigra` executable does is
// reachable through run() so it can be tested in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dtigra/solvers.hpp"
#include "dtigra/theory.hpp"

namespace dtigra::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum class SolverKind { Dtigra, Landweber };

struct ExperimentConfig {
  unsigned levels = 9;
  double p = 1.2;
  double noise = 0.01;  // relative level
  double start_norm = 1.0;
  std::uint64_t seed_noise = 42;
  std::uint64_t seed_start = 1;
  SolverKind solver = SolverKind::Dtigra;
  DtigraConfig dtigra;
  LandweberConfig landweber;
  // Only meaningful with the theoretical step policy; p is taken from above.
  std::optional<theory::AssumptionParams> assumptions;
  // 1-based (index, value) pairs of the true coefficient vector.
  std::vector<std::pair<std::size_t, double>> true_coefficients = {{2, 3.0}, {4, -1.0}, {7, 0.5}};

  std::size_t n() const { return std::size_t{1} << levels; }
  /// Throws std::invalid_argument on an inadmissible configuration.
  void validate() const;
};

json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const fs::path& path, ExperimentConfig base = {});

std::string to_string(SolverKind k);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSafeguard = 2;  // solver stopped by a cap, floor or stall

void cmd_generate(const ExperimentConfig& cfg, const fs::path& out);

struct SolveReport {
  SolverResult result;
  double delta = 0.0;
  int exit_code = kExitOk;
};
/// Reads the bundle written by cmd_generate, runs the configured solver and
/// writes result.json, trace.csv and x_final.csv into `out`.
SolveReport cmd_solve(const ExperimentConfig& cfg, const fs::path& bundle, const fs::path& out);

/// Constants for the assumption parameters in `params` (see README for keys).
json cmd_constants(const json& params);

struct TableGrid {
  std::vector<double> noise = {0.05, 0.01, 0.005};
  std::vector<double> start_norms_dtigra = {1.0, 500.0, 1000.0, 10000.0};
  std::vector<double> start_norms_landweber = {1.0, 500.0, 1000.0};
  std::vector<double> p = {1.2, 1.6};
};

struct CellOutcome {
  SolverKind solver = SolverKind::Dtigra;
  double p = 0.0;
  double noise = 0.0;
  double start_norm = 0.0;
  StopReason stop = StopReason::OuterCap;
  double alpha = 0.0;
  std::size_t j_star = 0;  // counted from 1
  std::size_t k_star = 0;
  double relative_error = 0.0;
  std::string failure;  // non-empty if the cell threw
  bool converged() const { return failure.empty() && stop == StopReason::Discrepancy; }
};

/// Runs one autoconvolution cell with the master config's seeds and solver settings.
CellOutcome run_cell(const ExperimentConfig& master, SolverKind solver, double p, double noise,
                     double start_norm);

/// Runs both grids with up to `threads` concurrent cells and writes
/// table1.csv, table2.csv and tables.json into `out`.
std::vector<CellOutcome> cmd_reproduce_tables(const ExperimentConfig& master, const TableGrid& grid,
                                              const fs::path& out, unsigned threads);

/// Entry point of the executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dtigra::cli
