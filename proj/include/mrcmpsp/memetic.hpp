#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mrcmpsp/constructor.hpp"
#include "mrcmpsp/hyperheuristic.hpp"
#include "mrcmpsp/model.hpp"
#include "mrcmpsp/sgs.hpp"

namespace mrcmpsp {

struct Individual {
  SequenceSolution solution;
  double f = 0.0;
  std::int64_t fd = 0;  // tpd
  Time fm = 0;          // tms
  int idle = 0;         // consecutive generations without an f_d improvement
  int birth = 0;        // generation of creation
};

struct ProgressRow {
  double wall;
  int generation;
  std::int64_t best_tpd;
  Time best_tms;
};

struct EngineConfig {
  int workers = 0;  // 0: detected logical cores; population = workers
  double total_time = 300.0;
  std::optional<int> max_generations;  // stop after this many generations
  std::optional<std::uint64_t> max_schedules;  // checked between generations
  LocalSearchConfig local_search;
  double gamma = 1e-6;
  double gamma_at = 0.7;  // fraction of the budget
  double accept_ratio = 1.05;
  int worst_count = 3;
  int min_age = 3;
  bool use_mcts = true;
  ConstructorConfig constructor;
  Time horizon_override = 0;
  std::uint64_t seed = 1;
  std::function<void(const ProgressRow&)> on_progress;
};

/// False when the member should be replaced: its f exceeds ratio times the
/// population's best f, or it is at least `min_age` generations old and among
/// the `worst_count` worst by f_d + idle (only with populations larger than
/// `worst_count`).
bool accept_individual(const std::vector<Individual>& population, std::size_t member, int generation,
                       double ratio = 1.05, int worst_count = 3, int min_age = 3);

/// Binary tournament with replacement: the lower-f of two uniform picks.
std::size_t select_parent(const std::vector<Individual>& population, Rng& rng);

constexpr int kMutationOptions = 5;

/// Applies mutation `option` (0..4), or a uniform choice when negative. The
/// child is decoded with `evaluator` and gets idle 0 and birth `generation`.
Individual mutate(const Individual& parent, Evaluator& evaluator, Rng& rng, int generation, int option = -1,
                  int* chosen = nullptr);

struct RunResult {
  Schedule best;
  SequenceSolution best_solution;
  std::uint64_t schedules = 0;
  int generations = 0;
  double wall = 0.0;
  double construction_wall = 0.0;
  std::optional<int> gamma_switch_generation;
  double gamma_switch_wall = 0.0;
  ProjectPartition partition;
  std::vector<ProgressRow> progress;
};

/// Construct, then alternate parallel local search and replacement until the
/// budget runs out or tpd reaches 0.
RunResult run(const Instance& instance, const EngineConfig& config);

struct SingleProjectConfig {
  std::uint64_t max_schedules = 50000;
  double total_time = 1e9;
  std::uint64_t restart_every = 10000;
  std::uint64_t seed = 1;
  Time horizon_override = 0;
  std::function<void(const ProgressRow&)> on_progress;
};

/// One local-search line restarted from a random solution every
/// `restart_every` schedules. Blocks always run to length; the total is
/// checked between blocks.
RunResult run_single_project(const Instance& instance, const SingleProjectConfig& config);

}  // namespace mrcmpsp
