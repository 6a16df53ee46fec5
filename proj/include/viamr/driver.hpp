#pragma once

#include "viamr/amr.hpp"
#include "viamr/metrics.hpp"
#include "viamr/problems.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace viamr {

// Exception for invalid configuration input (maps to CLI exit code 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Strategy { uniform, vces, udo, hybrid_vces, hybrid_udo };
Strategy strategy_from_string(const std::string& name);  // throws ConfigError
const char* to_string(Strategy strategy);

struct VcesParams {
  double alpha = 0.2;
  double beta = 0.8;
};

struct UdoParams {
  int depth = 3;
};

struct RunConfig {
  std::string problem = "ball";  // ball | spiral | poisson | obstacle1d | poisson1d
  Strategy strategy = Strategy::vces;
  int iterations = 6;
  int initial_n = 8;  // initial structured mesh resolution (cells per side)
  VcesParams vces;
  UdoParams udo;
  SolverParams solver;
  std::string out_dir = "out";
  unsigned seed = 0;
  int partitions = 1;            // part-id field written with every mesh
  int jaccard_k = 16;            // subdivision order of the area metric
  int fb_samples_per_edge = 16;  // discrete free-boundary sampling density
  int exact_fb_samples = 4096;   // analytic free-boundary sampling density
  bool write_files = true;       // emit per-iteration meshes and csv/json
};

// JSON round trip; unknown keys and invalid values raise ConfigError.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

struct IterationRecord {
  int iteration = 0;
  int vertices = 0;
  int cells = 0;
  int solver_iterations = 0;
  bool has_l2 = false;
  double l2_error = 0.0;
  bool has_jaccard = false;
  double one_minus_jaccard = 0.0;
  bool has_hausdorff = false;
  double hausdorff_dist = 0.0;
  bool has_min_angle = false;
  double min_angle = 0.0;
  std::string decision;  // "uniform" or "adaptive"
};

// header + one row per record; absent optional metrics print as empty fields
std::string format_convergence_csv(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> parse_convergence_csv(const std::string& text);

struct RunOutput {
  std::vector<IterationRecord> records;
  bool solver_ok = true;      // false: aborted early, records are partial
  std::vector<std::string> warnings;
  std::vector<std::string> log;  // solver monitor lines, one per Newton iteration
  std::string error;          // why the solver aborted, when solver_ok is false
};

// Solve -> estimate -> tag -> refine; writes iterNN.vtk, convergence.csv and
// run.json into out_dir when configured to. Configuration problems throw
// ConfigError; solver breakdown ends the loop early with partial records.
RunOutput run_refinement_loop(const RunConfig& config);

struct PartitionReport {
  int parts = 1;
  int cells = 0;
  int inactive_cells = 0;
  std::vector<double> ratios;  // per-part share of the inactive cells
  double spread = 0.0;         // max ratio - min ratio
};

struct PartitionStudy {
  PartitionReport adaptive;
  PartitionReport uniform;
  int uniform_levels = 0;  // uniform refinements matching the adaptive cell count
};

// Runs the configured adaptive pipeline, then a uniform pipeline refined to
// the closest comparable cell count, and reports the balance of inactive
// cells under coordinate bisection into `parts` parts for both.
PartitionStudy run_partition_study(const RunConfig& config, int parts);

}  // namespace viamr
