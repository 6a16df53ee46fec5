// viamr -- adaptive mesh refinement for the obstacle problem.
//
// Subcommands:
//   run        solve/estimate/tag/refine loop, writes per-iteration meshes + csv
//   partition  balance study comparing adaptive and uniform meshes
//
// Exit codes: 0 success, 2 solver failure, 3 configuration error.

#include "viamr/driver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

struct Overrides {
  std::string config_path;
  std::string problem;
  std::string strategy;
  int iterations = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int depth = 0;
  std::string out_dir;
  int initial_n = 0;
  int partitions = 0;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--problem", o.problem,
                  "problem name: poisson | ball | spiral | obstacle1d | poisson1d");
  cmd->add_option("--strategy", o.strategy,
                  "refinement strategy: uniform | vces | udo | hybrid-vces | hybrid-udo");
  cmd->add_option("--iterations", o.iterations, "number of solve/refine iterations");
  cmd->add_option("--alpha", o.alpha, "lower vces threshold");
  cmd->add_option("--beta", o.beta, "upper vces threshold");
  cmd->add_option("--depth", o.depth, "udo dilation depth");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--initial-n", o.initial_n, "initial structured mesh resolution");
}

viamr::RunConfig build_config(const CLI::App* cmd, const Overrides& o) {
  viamr::RunConfig config;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw viamr::ConfigError("config: cannot open '" + o.config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    config = viamr::config_from_json(buf.str());
  }
  if (cmd->count("--problem")) config.problem = o.problem;
  if (cmd->count("--strategy")) config.strategy = viamr::strategy_from_string(o.strategy);
  if (cmd->count("--iterations")) config.iterations = o.iterations;
  if (cmd->count("--alpha")) config.vces.alpha = o.alpha;
  if (cmd->count("--beta")) config.vces.beta = o.beta;
  if (cmd->count("--depth")) config.udo.depth = o.depth;
  if (cmd->count("--out")) config.out_dir = o.out_dir;
  if (cmd->count("--initial-n")) config.initial_n = o.initial_n;
  return config;
}

int do_run(const CLI::App* cmd, const Overrides& o) {
  const viamr::RunConfig config = build_config(cmd, o);
  const viamr::RunOutput out = viamr::run_refinement_loop(config);

  for (const std::string& line : out.log) std::cout << line << "\n";
  for (const std::string& warning : out.warnings) std::cerr << "warning: " << warning << "\n";
  std::cout << viamr::format_convergence_csv(out.records);

  if (!out.solver_ok) {
    std::cerr << "error: " << out.error << "\n";
    return 2;
  }
  if (config.write_files) {
    std::cout << "wrote " << config.out_dir << "/convergence.csv and run.json\n";
  }
  return 0;
}

void print_report(const char* label, const viamr::PartitionReport& r) {
  std::printf("%-9s cells %7d  inactive %7d  spread %.6f  ratios", label, r.cells,
              r.inactive_cells, r.spread);
  for (double ratio : r.ratios) std::printf(" %.4f", ratio);
  std::printf("\n");
}

int do_partition(const CLI::App* cmd, const Overrides& o, int parts) {
  const viamr::RunConfig config = build_config(cmd, o);
  const viamr::PartitionStudy study = viamr::run_partition_study(config, parts);

  std::printf("partition study: %d parts, %d uniform levels for comparison\n", parts,
              study.uniform_levels);
  print_report("adaptive", study.adaptive);
  print_report("uniform", study.uniform);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive mesh refinement toolkit for the obstacle problem"};
  app.require_subcommand(1);

  Overrides run_opts, part_opts;
  int parts = 5;

  CLI::App* run_cmd = app.add_subcommand("run", "execute the refinement loop");
  add_common_options(run_cmd, run_opts);

  CLI::App* part_cmd =
      app.add_subcommand("partition", "compare partition balance of adaptive and uniform meshes");
  add_common_options(part_cmd, part_opts);
  part_cmd->add_option("--parts", parts, "number of partition parts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;  // bad flags are configuration errors
  }

  try {
    if (run_cmd->parsed()) return do_run(run_cmd, run_opts);
    return do_partition(part_cmd, part_opts, parts);
  } catch (const viamr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const viamr::SolverFailure& e) {
    std::cerr << "error: solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
