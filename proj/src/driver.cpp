#include "viamr/driver.hpp"

#include "viamr/fem.hpp"
#include "viamr/vtk.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace viamr {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

const std::vector<std::string> kProblems = {"poisson", "ball", "spiral", "obstacle1d",
                                            "poisson1d"};

void require_known_keys(const json& obj, const std::vector<std::string>& known,
                        const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void fetch(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void validate_config(const RunConfig& c) {
  if (std::find(kProblems.begin(), kProblems.end(), c.problem) == kProblems.end()) {
    throw ConfigError("config: unknown problem '" + c.problem + "'");
  }
  if (c.iterations < 1) throw ConfigError("config: iterations must be >= 1");
  if (c.initial_n < 1) throw ConfigError("config: initial_n must be >= 1");
  if (!(c.vces.alpha >= 0.0 && c.vces.alpha < c.vces.beta && c.vces.beta <= 1.0)) {
    throw ConfigError("config: vces thresholds need 0 <= alpha < beta <= 1");
  }
  if (c.udo.depth < 0) throw ConfigError("config: udo depth must be >= 0");
  if (c.partitions < 1) throw ConfigError("config: partitions must be >= 1");
  if (c.jaccard_k < 1) throw ConfigError("config: jaccard_k must be >= 1");
  if (c.fb_samples_per_edge < 2) throw ConfigError("config: fb_samples_per_edge must be >= 2");
  if (c.exact_fb_samples < 2) throw ConfigError("config: exact_fb_samples must be >= 2");
  if (c.solver.max_iterations < 1) throw ConfigError("config: solver max_iterations must be >= 1");
}

// ---------------------------------------------------------------------------
// shared pieces of the refinement loop
// ---------------------------------------------------------------------------

std::string iter_file_name(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "iter%02d.vtk", iteration);
  return buf;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::filesystem::path prepare_out_dir(const RunConfig& config) {
  std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("config: cannot create output directory '" + config.out_dir + "'");
  return dir;
}

Vector to_double_field(const std::vector<std::uint8_t>& mask) {
  Vector v(static_cast<Eigen::Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) v[static_cast<Eigen::Index>(i)] = mask[i];
  return v;
}

Vector to_double_field(const std::vector<int>& ids) {
  Vector v(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) v[static_cast<Eigen::Index>(i)] = ids[i];
  return v;
}

void append_monitor_log(std::vector<std::string>& log, int outer_iteration,
                        const VISolveResult& res) {
  for (const MonitorRecord& m : res.monitor) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "[solve %02d] iteration %d residual %.10e Active lower constraints %d/%d",
                  outer_iteration, m.iteration, m.residual, m.active, m.at_bound);
    log.emplace_back(buf);
  }
}

// Strategy step on the current solution: returns the refinement mask and the
// decision label, falling back to uniform (with a warning) whenever the
// tagging produces an empty mask.
struct TagOutcome {
  std::vector<std::uint8_t> mask;
  std::string decision;
};

TagOutcome decide_mask(const RunConfig& config, const Mesh& mesh, const Adjacency& adj,
                       const Vector& s0, bool have_hausdorff, double hausdorff_dist,
                       int iteration, std::vector<std::string>& warnings) {
  const auto uniform_mask = [&] {
    return std::vector<std::uint8_t>(static_cast<std::size_t>(mesh.num_cells()), 1);
  };

  Strategy strategy = config.strategy;
  if (strategy == Strategy::hybrid_vces || strategy == Strategy::hybrid_udo) {
    bool go_uniform = true;
    if (have_hausdorff) {
      const double h = max_inactive_diameter(mesh, s0);
      go_uniform = hybrid_decide(hausdorff_dist, h);
    } else {
      warnings.push_back("iteration " + std::to_string(iteration) +
                         ": free boundary not resolved, hybrid falls back to uniform");
    }
    if (go_uniform) return {uniform_mask(), "uniform"};
    strategy = (strategy == Strategy::hybrid_vces) ? Strategy::vces : Strategy::udo;
  }

  if (strategy == Strategy::uniform) return {uniform_mask(), "uniform"};

  std::vector<std::uint8_t> mask;
  if (strategy == Strategy::vces) {
    const Vector s1 = vces_smooth(mesh, adj, s0);
    mask = vces_tag(mesh, s1, config.vces.alpha, config.vces.beta);
  } else {
    mask = udo_tag(mesh, adj, s0, config.udo.depth);
  }
  if (std::find(mask.begin(), mask.end(), std::uint8_t{1}) == mask.end()) {
    warnings.push_back("iteration " + std::to_string(iteration) +
                       ": empty mask, forcing uniform refinement");
    return {uniform_mask(), "uniform"};
  }
  return {mask, "adaptive"};
}

std::vector<Eigen::Vector2d> sample_exact_free_boundary(const ObstacleProblem& prob,
                                                        int samples) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    pts.push_back(prob.free_boundary_point(static_cast<double>(j) / samples));
  }
  return pts;
}

// State the partition study needs beyond the records.
struct FinalState {
  Mesh mesh;       // last solved mesh (before any further refinement)
  Vector s0;       // its nodal contact indicator
  bool valid = false;
};

RunOutput run_obstacle_2d(const RunConfig& config, const ObstacleProblem& prob,
                          FinalState* final_state) {
  RunOutput out;
  Mesh mesh = build_structured_square(config.initial_n, prob.lo, prob.hi);

  std::vector<Eigen::Vector2d> exact_fb;
  if (prob.has_exact_free_boundary) {
    exact_fb = sample_exact_free_boundary(prob, config.exact_fb_samples);
  }

  const std::filesystem::path dir = config.write_files ? prepare_out_dir(config) : "";

  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    const Adjacency adj = build_adjacency(mesh);

    IterationRecord rec;
    rec.iteration = iteration;
    rec.vertices = mesh.num_vertices();
    rec.cells = mesh.num_cells();

    VISolveResult res;
    try {
      res = solve_vi(discretize_obstacle(mesh, prob), config.solver);
    } catch (const SolverFailure& e) {
      rec.decision = "aborted";
      out.records.push_back(rec);
      out.solver_ok = false;
      out.error = std::string("linear solver breakdown at iteration ") +
                  std::to_string(iteration) + ": " + e.what();
      return out;
    }
    append_monitor_log(out.log, iteration, res);
    rec.solver_iterations = res.iterations;

    const bool converged = res.reason == ConvergedReason::atol ||
                           res.reason == ConvergedReason::rtol ||
                           res.reason == ConvergedReason::stol;
    if (!converged) {
      rec.decision = "aborted";
      out.records.push_back(rec);
      out.solver_ok = false;
      out.error = "solver did not converge at iteration " + std::to_string(iteration) +
                  " (" + to_string(res.reason) + ")";
      return out;
    }

    const FieldP1 u{&mesh, res.u};
    const FieldP1 psi = interpolate_p1(mesh, prob.psi);
    const Vector s0 = nodal_active_indicator(u, psi);
    const std::vector<std::uint8_t> active = active_cells(mesh, s0);
    const FreeBoundary fb =
        extract_free_boundary(mesh, adj, active, config.fb_samples_per_edge);

    if (prob.has_exact) {
      rec.has_l2 = true;
      rec.l2_error = error_l2(u, prob.exact);
    }
    if (prob.has_exact_free_boundary) {
      rec.has_jaccard = true;
      rec.one_minus_jaccard = 1.0 - jaccard(mesh, active, prob.exact_active, config.jaccard_k);
      if (!fb.empty) {
        rec.has_hausdorff = true;
        rec.hausdorff_dist = hausdorff(fb.points, exact_fb);
      }
    }
    rec.has_min_angle = true;
    rec.min_angle = quality(mesh).min_angle_deg;

    const TagOutcome tag = decide_mask(config, mesh, adj, s0, rec.has_hausdorff,
                                       rec.hausdorff_dist, iteration, out.warnings);
    rec.decision = tag.decision;
    out.records.push_back(rec);

    if (config.write_files) {
      VtkFields fields;
      fields.point_data.emplace_back("u", res.u);
      fields.point_data.emplace_back("psi", psi.values);
      fields.point_data.emplace_back("gap", Vector(res.u - psi.values));
      fields.cell_data.emplace_back("mask", to_double_field(tag.mask));
      fields.cell_data.emplace_back("part",
                                    to_double_field(rcb_partition(mesh, config.partitions)));
      write_vtk_file((dir / iter_file_name(iteration)).string(), mesh, fields);
    }

    if (final_state != nullptr) {
      final_state->mesh = mesh;
      final_state->s0 = s0;
      final_state->valid = true;
    }

    if (iteration + 1 < config.iterations) mesh = refine_marked(mesh, tag.mask);
  }
  return out;
}

RunOutput run_poisson_2d(const RunConfig& config) {
  RunOutput out;
  const PoissonProblem prob = poisson_reference();
  Mesh mesh = build_structured_square(config.initial_n, prob.lo, prob.hi);
  const std::filesystem::path dir = config.write_files ? prepare_out_dir(config) : "";

  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    const Adjacency adj = build_adjacency(mesh);

    IterationRecord rec;
    rec.iteration = iteration;
    rec.vertices = mesh.num_vertices();
    rec.cells = mesh.num_cells();
    rec.solver_iterations = 0;

    Vector u_values;
    try {
      const SparseMatrix A = assemble_stiffness(mesh);
      const Vector b = assemble_load(mesh, prob.load);
      const auto [A_bc, b_bc] =
          apply_dirichlet(A, b, boundary_condition(mesh, prob.dirichlet));
      u_values = solve_spd(A_bc, b_bc, config.solver.lin_rel_tol);
    } catch (const SolverFailure& e) {
      rec.decision = "aborted";
      out.records.push_back(rec);
      out.solver_ok = false;
      out.error = std::string("linear solver breakdown at iteration ") +
                  std::to_string(iteration) + ": " + e.what();
      return out;
    }

    const FieldP1 u{&mesh, u_values};
    rec.has_l2 = true;
    rec.l2_error = error_l2(u, prob.exact);
    rec.has_min_angle = true;
    rec.min_angle = quality(mesh).min_angle_deg;

    // No obstacle: the contact indicator is identically zero, so adaptive
    // strategies degenerate to the empty-mask uniform fallback.
    const Vector s0 = Vector::Zero(mesh.num_vertices());
    const TagOutcome tag =
        decide_mask(config, mesh, adj, s0, false, 0.0, iteration, out.warnings);
    rec.decision = tag.decision;
    out.records.push_back(rec);

    if (config.write_files) {
      VtkFields fields;
      fields.point_data.emplace_back("u", u_values);
      fields.cell_data.emplace_back("mask", to_double_field(tag.mask));
      fields.cell_data.emplace_back("part",
                                    to_double_field(rcb_partition(mesh, config.partitions)));
      write_vtk_file((dir / iter_file_name(iteration)).string(), mesh, fields);
    }

    if (iteration + 1 < config.iterations) mesh = refine_marked(mesh, tag.mask);
  }
  return out;
}

RunOutput run_1d(const RunConfig& config) {
  RunOutput out;
  const bool obstacle = config.problem == "obstacle1d";
  if (config.strategy != Strategy::uniform) {
    out.warnings.push_back("1d studies refine uniformly; strategy setting has no effect");
  }
  if (config.write_files) prepare_out_dir(config);

  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    const int n = config.initial_n << iteration;
    const Result1D r = obstacle ? solve_1d_obstacle(n) : solve_1d_poisson(n);

    IterationRecord rec;
    rec.iteration = iteration;
    rec.vertices = n + 1;
    rec.cells = n;
    rec.solver_iterations = r.solver_iterations;
    rec.has_l2 = true;
    rec.l2_error = r.l2_error;
    rec.decision = "uniform";
    if (obstacle && std::isfinite(r.fb_gap)) {
      // the 1d analogue of the free-boundary distance goes in the same column
      rec.has_hausdorff = true;
      rec.hausdorff_dist = r.fb_gap;
    }
    out.records.push_back(rec);

    if (obstacle) {
      const bool converged = r.reason == ConvergedReason::atol ||
                             r.reason == ConvergedReason::rtol ||
                             r.reason == ConvergedReason::stol;
      if (!converged) {
        out.solver_ok = false;
        out.error = "solver did not converge at iteration " + std::to_string(iteration) +
                    " (" + to_string(r.reason) + ")";
        return out;
      }
    }
  }
  return out;
}

void write_run_outputs(const RunConfig& config, const RunOutput& out) {
  if (!config.write_files) return;
  const std::filesystem::path dir = prepare_out_dir(config);
  write_text_file(dir / "convergence.csv", format_convergence_csv(out.records));
  write_text_file(dir / "run.json", config_to_json(config) + "\n");
}

RunOutput run_dispatch(const RunConfig& config, FinalState* final_state) {
  validate_config(config);
  const bool hybrid =
      config.strategy == Strategy::hybrid_vces || config.strategy == Strategy::hybrid_udo;

  RunOutput out;
  if (config.problem == "ball" || config.problem == "spiral") {
    const ObstacleProblem prob =
        config.problem == "ball" ? ball_obstacle() : spiral_obstacle();
    if (hybrid && !prob.has_exact_free_boundary) {
      throw ConfigError("config: strategy '" + std::string(to_string(config.strategy)) +
                        "' needs a problem with a known free boundary");
    }
    out = run_obstacle_2d(config, prob, final_state);
  } else if (config.problem == "poisson") {
    if (hybrid) {
      throw ConfigError("config: strategy '" + std::string(to_string(config.strategy)) +
                        "' needs a problem with a known free boundary");
    }
    out = run_poisson_2d(config);
  } else {
    if (hybrid) {
      throw ConfigError("config: strategy '" + std::string(to_string(config.strategy)) +
                        "' needs a problem with a known free boundary");
    }
    out = run_1d(config);
  }
  write_run_outputs(config, out);
  return out;
}

int count_subset(const std::vector<std::uint8_t>& mask) {
  return static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

PartitionReport make_report(const Mesh& mesh, const Vector& s0, int parts) {
  PartitionReport report;
  report.parts = parts;
  report.cells = mesh.num_cells();
  std::vector<std::uint8_t> inactive = active_cells(mesh, s0);
  for (auto& v : inactive) v = v ? 0 : 1;
  report.inactive_cells = count_subset(inactive);
  report.ratios = partition_ratios(rcb_partition(mesh, parts), inactive, parts);
  const auto [lo, hi] = std::minmax_element(report.ratios.begin(), report.ratios.end());
  report.spread = *hi - *lo;
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------
// public API
// ---------------------------------------------------------------------------

Strategy strategy_from_string(const std::string& name) {
  if (name == "uniform") return Strategy::uniform;
  if (name == "vces") return Strategy::vces;
  if (name == "udo") return Strategy::udo;
  if (name == "hybrid-vces") return Strategy::hybrid_vces;
  if (name == "hybrid-udo") return Strategy::hybrid_udo;
  throw ConfigError("config: unknown strategy '" + name + "'");
}

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::uniform: return "uniform";
    case Strategy::vces: return "vces";
    case Strategy::udo: return "udo";
    case Strategy::hybrid_vces: return "hybrid-vces";
    case Strategy::hybrid_udo: return "hybrid-udo";
  }
  return "uniform";
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid json: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  require_known_keys(j, {"problem", "strategy", "iterations", "initial_n", "vces", "udo",
                         "solver", "out_dir", "seed", "partitions", "jaccard_k",
                         "fb_samples_per_edge", "exact_fb_samples", "write_files"},
                     "top level");

  RunConfig c;
  fetch(j, "problem", c.problem);
  if (j.contains("strategy")) {
    std::string name;
    fetch(j, "strategy", name);
    c.strategy = strategy_from_string(name);
  }
  fetch(j, "iterations", c.iterations);
  fetch(j, "initial_n", c.initial_n);
  fetch(j, "out_dir", c.out_dir);
  fetch(j, "seed", c.seed);
  fetch(j, "partitions", c.partitions);
  fetch(j, "jaccard_k", c.jaccard_k);
  fetch(j, "fb_samples_per_edge", c.fb_samples_per_edge);
  fetch(j, "exact_fb_samples", c.exact_fb_samples);
  fetch(j, "write_files", c.write_files);

  if (j.contains("vces")) {
    const json& v = j.at("vces");
    if (!v.is_object()) throw ConfigError("config: 'vces' must be an object");
    require_known_keys(v, {"alpha", "beta"}, "'vces'");
    fetch(v, "alpha", c.vces.alpha);
    fetch(v, "beta", c.vces.beta);
  }
  if (j.contains("udo")) {
    const json& v = j.at("udo");
    if (!v.is_object()) throw ConfigError("config: 'udo' must be an object");
    require_known_keys(v, {"depth"}, "'udo'");
    fetch(v, "depth", c.udo.depth);
  }
  if (j.contains("solver")) {
    const json& v = j.at("solver");
    if (!v.is_object()) throw ConfigError("config: 'solver' must be an object");
    require_known_keys(v,
                       {"atol", "rtol", "stol", "vi_zero_tol", "max_iterations",
                        "armijo_sigma", "min_step", "lin_rel_tol"},
                       "'solver'");
    fetch(v, "atol", c.solver.atol);
    fetch(v, "rtol", c.solver.rtol);
    fetch(v, "stol", c.solver.stol);
    fetch(v, "vi_zero_tol", c.solver.vi_zero_tol);
    fetch(v, "max_iterations", c.solver.max_iterations);
    fetch(v, "armijo_sigma", c.solver.armijo_sigma);
    fetch(v, "min_step", c.solver.min_step);
    fetch(v, "lin_rel_tol", c.solver.lin_rel_tol);
  }

  validate_config(c);
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["strategy"] = to_string(c.strategy);
  j["iterations"] = c.iterations;
  j["initial_n"] = c.initial_n;
  j["vces"] = {{"alpha", c.vces.alpha}, {"beta", c.vces.beta}};
  j["udo"] = {{"depth", c.udo.depth}};
  j["solver"] = {{"atol", c.solver.atol},
                 {"rtol", c.solver.rtol},
                 {"stol", c.solver.stol},
                 {"vi_zero_tol", c.solver.vi_zero_tol},
                 {"max_iterations", c.solver.max_iterations},
                 {"armijo_sigma", c.solver.armijo_sigma},
                 {"min_step", c.solver.min_step},
                 {"lin_rel_tol", c.solver.lin_rel_tol}};
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  j["partitions"] = c.partitions;
  j["jaccard_k"] = c.jaccard_k;
  j["fb_samples_per_edge"] = c.fb_samples_per_edge;
  j["exact_fb_samples"] = c.exact_fb_samples;
  j["write_files"] = c.write_files;
  return j.dump(2);
}

std::string format_convergence_csv(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  out << "iteration,vertices,cells,solver_iterations,l2_error,one_minus_jaccard,"
         "hausdorff,min_angle,decision\n";
  for (const IterationRecord& r : records) {
    out << r.iteration << ',' << r.vertices << ',' << r.cells << ',' << r.solver_iterations
        << ',';
    if (r.has_l2) out << fmt_double(r.l2_error);
    out << ',';
    if (r.has_jaccard) out << fmt_double(r.one_minus_jaccard);
    out << ',';
    if (r.has_hausdorff) out << fmt_double(r.hausdorff_dist);
    out << ',';
    if (r.has_min_angle) out << fmt_double(r.min_angle);
    out << ',' << r.decision << '\n';
  }
  return out.str();
}

std::vector<IterationRecord> parse_convergence_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("convergence csv: empty input");
  if (line != "iteration,vertices,cells,solver_iterations,l2_error,one_minus_jaccard,"
              "hausdorff,min_angle,decision") {
    throw std::runtime_error("convergence csv: unexpected header");
  }

  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 9) throw std::runtime_error("convergence csv: malformed row");

    const auto to_int = [](const std::string& s) {
      try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw std::runtime_error("convergence csv: malformed integer '" + s + "'");
      }
    };
    const auto opt_double = [](const std::string& s, bool& has, double& value) {
      if (s.empty()) {
        has = false;
        return;
      }
      try {
        std::size_t pos = 0;
        value = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw std::runtime_error("convergence csv: malformed number '" + s + "'");
      }
      has = true;
    };

    IterationRecord r;
    r.iteration = to_int(fields[0]);
    r.vertices = to_int(fields[1]);
    r.cells = to_int(fields[2]);
    r.solver_iterations = to_int(fields[3]);
    opt_double(fields[4], r.has_l2, r.l2_error);
    opt_double(fields[5], r.has_jaccard, r.one_minus_jaccard);
    opt_double(fields[6], r.has_hausdorff, r.hausdorff_dist);
    opt_double(fields[7], r.has_min_angle, r.min_angle);
    r.decision = fields[8];
    records.push_back(r);
  }
  return records;
}

RunOutput run_refinement_loop(const RunConfig& config) {
  return run_dispatch(config, nullptr);
}

PartitionStudy run_partition_study(const RunConfig& config, int parts) {
  validate_config(config);
  if (parts < 1) throw ConfigError("config: partition study needs parts >= 1");
  if (config.problem != "ball" && config.problem != "spiral") {
    throw ConfigError("config: partition study needs a 2d obstacle problem");
  }
  const ObstacleProblem prob = config.problem == "ball" ? ball_obstacle() : spiral_obstacle();

  // Adaptive pipeline: reuse the refinement loop and keep its last solved mesh.
  FinalState adaptive_state;
  RunConfig adaptive_cfg = config;
  adaptive_cfg.write_files = false;
  const RunOutput adaptive_out = run_obstacle_2d(adaptive_cfg, prob, &adaptive_state);
  if (!adaptive_out.solver_ok || !adaptive_state.valid) {
    throw SolverFailure("partition study: adaptive pipeline failed: " + adaptive_out.error,
                        0.0);
  }

  PartitionStudy study;
  study.adaptive = make_report(adaptive_state.mesh, adaptive_state.s0, parts);

  // Uniform pipeline refined to the closest comparable cell count (ties to
  // the finer level).
  const long long target = study.adaptive.cells;
  const long long base = 2LL * config.initial_n * config.initial_n;
  int best_level = 0;
  long long best_diff = std::numeric_limits<long long>::max();
  for (int level = 0; level <= 12; ++level) {
    const long long cells = base << (2 * level);
    const long long diff = std::llabs(cells - target);
    if (diff <= best_diff) {
      best_diff = diff;
      best_level = level;
    }
    if (cells > 4 * target) break;
  }
  study.uniform_levels = best_level;

  Mesh mesh = build_structured_square(config.initial_n, prob.lo, prob.hi);
  for (int level = 0; level < best_level; ++level) mesh = uniform_refine(mesh);
  const VISolveResult res = solve_vi(discretize_obstacle(mesh, prob), config.solver);
  const FieldP1 u{&mesh, res.u};
  const FieldP1 psi = interpolate_p1(mesh, prob.psi);
  const Vector s0 = nodal_active_indicator(u, psi);
  study.uniform = make_report(mesh, s0, parts);

  if (config.write_files) {
    const std::filesystem::path dir = prepare_out_dir(config);
    const auto write_mesh = [&](const Mesh& m, const Vector& field_s0, const Vector& sol,
                                const std::string& name) {
      VtkFields fields;
      fields.point_data.emplace_back("u", sol);
      fields.point_data.emplace_back("active", field_s0);
      fields.cell_data.emplace_back("part", to_double_field(rcb_partition(m, parts)));
      write_vtk_file((dir / name).string(), m, fields);
    };
    // the adaptive pipeline's solution is not retained; re-solve for output
    const VISolveResult res_a = solve_vi(discretize_obstacle(adaptive_state.mesh, prob),
                                         config.solver);
    write_mesh(adaptive_state.mesh, adaptive_state.s0, res_a.u, "partition_adaptive.vtk");
    write_mesh(mesh, s0, res.u, "partition_uniform.vtk");
  }
  return study;
}

}  // namespace viamr
