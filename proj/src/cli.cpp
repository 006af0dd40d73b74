#include "mrcmpsp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "mrcmpsp/bench.hpp"
#include "mrcmpsp/constructor.hpp"
#include "mrcmpsp/instance_io.hpp"
#include "mrcmpsp/memetic.hpp"
#include "mrcmpsp/objectives.hpp"
#include "mrcmpsp/sgs.hpp"
#include "mrcmpsp/synthetic.hpp"

namespace mrcmpsp {
namespace {

struct SolveOptions {
  std::string instance;
  double time = 300.0;
  std::uint64_t schedules = 0;  // 0: no cap
  std::uint64_t seed = 1;
  int workers = 0;
  std::string gamma = "1/1000000";
  double gamma_at = 0.7;
  double ls_time = 5.0;
  std::uint64_t ls_schedules = 0;  // nonzero: local search runs on the schedule clock
  bool no_mcts = false;
  bool single_project = false;
  std::uint64_t restart_every = 10000;
  std::string trace;
  std::string out;
  Time horizon = 0;
  bool progress = false;
};

/// "a/b" or a decimal literal.
double parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::size_t used = 0;
  if (slash == std::string::npos) {
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad number: " + text);
    return v;
  }
  double num = std::stod(text.substr(0, slash), &used);
  if (used != slash) throw std::invalid_argument("bad rational: " + text);
  std::string rest = text.substr(slash + 1);
  double den = std::stod(rest, &used);
  if (used != rest.size() || den == 0) throw std::invalid_argument("bad rational: " + text);
  return num / den;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

int solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const Instance instance = load_instance(o.instance, o.horizon);
  const double gamma = parse_rational(o.gamma);

  std::ostringstream trace;
  trace << "wall,generation,best_tpd,best_tms,event\n";
  auto on_progress = [&](const ProgressRow& row) {
    trace << std::fixed << std::setprecision(3) << row.wall << ',' << row.generation << ',' << row.best_tpd << ','
          << row.best_tms << ",progress\n";
    if (o.progress)
      err << "progress wall " << std::fixed << std::setprecision(3) << row.wall << " generation " << row.generation
          << " tpd " << row.best_tpd << " tms " << row.best_tms << '\n';
  };

  RunResult result;
  if (o.single_project) {
    SingleProjectConfig c;
    c.max_schedules = o.schedules > 0 ? o.schedules : 50000;
    c.total_time = o.time;
    c.restart_every = o.restart_every;
    c.seed = o.seed;
    c.horizon_override = o.horizon;
    c.on_progress = on_progress;
    result = run_single_project(instance, c);
  } else {
    EngineConfig c;
    c.workers = o.workers;
    c.total_time = o.time;
    if (o.schedules > 0) c.max_schedules = o.schedules;
    if (o.ls_schedules > 0) {
      c.local_search.clock = ClockMode::schedules;
      c.local_search.budget = static_cast<double>(o.ls_schedules);
    } else {
      c.local_search.budget = o.ls_time;
    }
    c.local_search.reset_after = c.local_search.budget / 5.0;
    c.local_search.second_stage_after = 3.0 * c.local_search.budget / 5.0;
    c.gamma = gamma;
    c.gamma_at = o.gamma_at;
    c.use_mcts = !o.no_mcts;
    c.horizon_override = o.horizon;
    c.seed = o.seed;
    c.on_progress = on_progress;
    result = run(instance, c);
    if (result.gamma_switch_generation)
      trace << std::fixed << std::setprecision(3) << result.gamma_switch_wall << ','
            << *result.gamma_switch_generation << ",,,gamma_switch\n";
  }

  FeasibilityReport report = is_feasible(instance, result.best);
  if (!report.ok()) {
    err << "error: internal: best schedule infeasible: " << report.violations.front().describe() << '\n';
    return exit_infeasible;
  }
  if (!o.out.empty()) write_text(o.out, write_solution(instance, result.best));
  if (!o.trace.empty()) write_text(o.trace, trace.str());
  out << "tpd " << result.best.tpd << " tms " << result.best.tms << " wall " << std::fixed << std::setprecision(3)
      << result.wall << " schedules " << result.schedules << " seed " << o.seed << '\n';
  return exit_ok;
}

int validate(const std::string& instance_path, const std::string& solution_path, Time horizon, std::ostream& out) {
  const Instance instance = load_instance(instance_path, horizon);
  const Schedule schedule = read_solution(instance, read_file(solution_path));
  FeasibilityReport report = is_feasible(instance, schedule);
  Objectives obj = objectives(instance, schedule, 0.0);
  if (report.ok()) {
    out << "ok tpd " << obj.tpd << " tms " << obj.tms << '\n';
    return exit_ok;
  }
  out << "infeasible: " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) out << "  " << v.describe() << '\n';
  out << "tpd " << obj.tpd << " tms " << obj.tms << '\n';
  return exit_infeasible;
}

int inspect(const std::vector<std::string>& paths, std::ostream& out) {
  out << stats_csv_header() << '\n';
  for (const auto& path : paths) {
    const Instance instance = load_instance(path);
    out << stats_csv_row(std::filesystem::path(path).stem().string(), stats(instance)) << '\n';
  }
  return exit_ok;
}

struct BenchOptions {
  std::vector<std::string> instances;
  std::size_t trace_length = 2000;
  double min_seconds = 1.0;
  std::uint64_t seed = 1;
  std::vector<std::string> variants;
};

int bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<BenchVariant> variants;
  for (auto& v : bench_variants())
    if (o.variants.empty() || std::find(o.variants.begin(), o.variants.end(), v.name) != o.variants.end())
      variants.push_back(v);
  if (variants.empty() && !o.variants.empty()) {
    err << "error: no known variant selected (naive, optimized, optimized+prefix, "
           "optimized+prefix+incremental)\n";
    return exit_usage;
  }
  write_bench_csv_header(out);
  for (const auto& path : o.instances) {
    const Instance instance = load_instance(path);
    auto trace = move_trace(instance, o.seed, o.trace_length);
    for (const auto& row :
         bench_instance(std::filesystem::path(path).stem().string(), instance, trace, variants, o.min_seconds))
      write_bench_csv_row(out, row);
  }
  return exit_ok;
}

struct GenerateOptions {
  std::string dir = "data";
  std::uint64_t seed = 20140707;
  std::vector<std::string> recipes;
  int j30 = 20;
};

int generate(const GenerateOptions& o, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(o.dir);
  int written = 0;
  for (const auto& recipe : table_recipes()) {
    if (!o.recipes.empty() && std::find(o.recipes.begin(), o.recipes.end(), recipe.name) == o.recipes.end())
      continue;
    GeneratedFiles files = generate_container(recipe, o.seed);
    for (const auto& [name, text] : files.projects) {
      fs::path p = fs::path(o.dir) / name;
      fs::create_directories(p.parent_path());
      write_text(p.string(), text);
    }
    write_text((fs::path(o.dir) / ("syn-" + recipe.name + ".mpc")).string(), files.container);
    ++written;
  }
  if (o.j30 > 0) {
    fs::create_directories(fs::path(o.dir) / "syn-j30");
    for (int k = 0; k < o.j30; ++k) {
      Rng rng(derive_seed(o.seed, 0x330, static_cast<std::uint64_t>(k)));
      ProjectShape shape;
      shape.jobs = 30;
      shape.avg_predecessors = 1.8;
      std::string base = "j30_" + std::to_string(k + 1);
      write_text((fs::path(o.dir) / "syn-j30" / (base + ".mm")).string(),
                 write_psplib_mm(generate_project(rng, shape), base));
    }
  }
  out << "wrote " << written << " containers and " << std::max(0, o.j30) << " single projects to " << o.dir << '\n';
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-mode resource-constrained multi-project scheduler"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Search for a schedule minimising tpd, then tms");
  solve_cmd->add_option("instance", so.instance, "Instance file (.mm, container or competition layout)")->required();
  solve_cmd->add_option("--time", so.time, "Wall-clock budget in seconds")->envname("MRCMPSP_TIME")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--schedules", so.schedules, "Budget in generated schedules (single-project default 50000)")
      ->envname("MRCMPSP_SCHEDULES");
  solve_cmd->add_option("--seed", so.seed, "Random seed")->envname("MRCMPSP_SEED");
  solve_cmd->add_option("--workers", so.workers, "Parallel workers / population size (0: all cores)")
      ->envname("MRCMPSP_WORKERS")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--gamma", so.gamma, "Weight of tms after the switch, e.g. 1/1000000")->envname("MRCMPSP_GAMMA");
  solve_cmd->add_option("--gamma-at", so.gamma_at, "Fraction of the budget at which gamma switches on")
      ->envname("MRCMPSP_GAMMA_AT")->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_option("--ls-time", so.ls_time, "Local-search budget per generation in seconds")
      ->envname("MRCMPSP_LS_TIME")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--ls-schedules", so.ls_schedules,
                        "Local-search budget per generation in schedules (reproducible runs)")
      ->envname("MRCMPSP_LS_SCHEDULES");
  solve_cmd->add_flag("--no-mcts", so.no_mcts, "Skip the tree-search construction")->envname("MRCMPSP_NO_MCTS");
  solve_cmd->add_flag("--single-project", so.single_project, "PSPLIB mode: one restarted local search")
      ->envname("MRCMPSP_SINGLE_PROJECT");
  solve_cmd->add_option("--restart-every", so.restart_every, "Schedules per restart block in single-project mode")
      ->envname("MRCMPSP_RESTART_EVERY")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--trace", so.trace, "Write best-so-far progress CSV here")->envname("MRCMPSP_TRACE");
  solve_cmd->add_option("--out", so.out, "Write the best solution here")->envname("MRCMPSP_OUT");
  solve_cmd->add_option("--horizon", so.horizon, "Override the time horizon T_max")->envname("MRCMPSP_HORIZON");
  solve_cmd->add_flag("--progress", so.progress, "Print progress to stderr")->envname("MRCMPSP_PROGRESS");

  std::string v_instance, v_solution;
  Time v_horizon = 0;
  auto* validate_cmd = app.add_subcommand("validate", "Check a solution file against an instance");
  validate_cmd->add_option("instance", v_instance, "Instance file")->required();
  validate_cmd->add_option("solution", v_solution, "Solution file")->required();
  validate_cmd->add_option("--horizon", v_horizon, "Override the time horizon T_max")->envname("MRCMPSP_HORIZON");

  std::vector<std::string> i_paths;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print instance characteristics as CSV");
  inspect_cmd->add_option("instances", i_paths, "Instance files")->required();

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Schedule-generator throughput per variant as CSV");
  bench_cmd->add_option("instances", bo.instances, "Instance files")->expected(0, -1);
  bench_cmd->add_option("--trace-length", bo.trace_length, "Solutions in the move trace")->envname("MRCMPSP_BENCH_TRACE");
  bench_cmd->add_option("--min-seconds", bo.min_seconds, "Minimum timing per variant")->envname("MRCMPSP_BENCH_SECONDS");
  bench_cmd->add_option("--seed", bo.seed, "Trace seed")->envname("MRCMPSP_SEED");
  bench_cmd->add_option("--variant", bo.variants, "Restrict to these variants (repeatable)");

  GenerateOptions go;
  auto* generate_cmd = app.add_subcommand("generate", "Write the synthetic stand-in instances");
  generate_cmd->add_option("dir", go.dir, "Output directory");
  generate_cmd->add_option("--seed", go.seed, "Generator seed");
  generate_cmd->add_option("--recipe", go.recipes, "Only these rows, e.g. A-1 (repeatable)");
  generate_cmd->add_option("--j30", go.j30, "Number of 30-job single projects")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (*solve_cmd) return solve(so, out, err);
    if (*validate_cmd) return validate(v_instance, v_solution, v_horizon, out);
    if (*inspect_cmd) return inspect(i_paths, out);
    if (*bench_cmd) return bench(bo, out, err);
    if (*generate_cmd) return generate(go, out);
  } catch (const ConstructionError& e) {
    err << "error: infeasible instance: " << e.what() << '\n';
    return exit_infeasible;
  } catch (const HorizonOverflow& e) {
    err << "error: " << e.what() << '\n';
    return exit_infeasible;
  } catch (const InstanceError& e) {
    err << "error: invalid instance: " << e.what() << '\n';
    return exit_infeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace mrcmpsp
