#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrcmpsp/model.hpp"
#include "mrcmpsp/neighbourhoods.hpp"
#include "mrcmpsp/rng.hpp"
#include "mrcmpsp/sgs.hpp"

namespace mrcmpsp {

enum class LlhClass { small, medium, large };

struct LlhParams {
  int fils_window = 2;
  int rr_min = 2;
  int rr_max = 3;
  double local_width_fraction = 0.1;  // of the current makespan
};

/// W = ceil(n/q) (at least 2); R&R cardinality in [2, max(3, ceil(n/20))].
LlhParams default_llh_params(const Instance& instance);

struct MoveInput {
  const Instance& instance;
  Rng& rng;
  const EvaluateFn& evaluate;
  double current_f;
  const Schedule& schedule;  // decoded current solution
  const LlhParams& params;
};

struct Heuristic {
  std::string name;
  LlhClass cls;
  std::function<MoveOutcome(SequenceSolution&, const MoveInput&)> apply;
};

/// Small, medium and large low-level heuristics. Without project moves the
/// large set and the Project-strategy reshuffle are left out.
std::vector<Heuristic> heuristic_catalogue(bool project_moves = true);

/// Active heuristics with positive integer scores.
class LlhPool {
 public:
  LlhPool() = default;
  /// All of 0..count-1 active with score 1.
  explicit LlhPool(int count);
  LlhPool(std::vector<int> ids, std::vector<int> scores);

  const std::vector<int>& ids() const { return ids_; }
  const std::vector<int>& scores() const { return scores_; }
  int total_score() const { return total_; }
  bool empty() const { return ids_.empty(); }
  /// Selection probability of heuristic `id` (0 when inactive).
  double probability(int id) const;

 private:
  std::vector<int> ids_;
  std::vector<int> scores_;
  int total_ = 0;
};

/// Draw proportional to score.
int select_llh(const LlhPool& pool, Rng& rng);

/// ceil(log_base f), clamped to at least 1.
int epsilon_log_term(double f_best, double base = 10.0);

/// (c + r) / f_best with c = ceil(log f_best) and r uniform in [1, c]; empty
/// when f_best <= 0, which ends the search.
std::optional<double> update_epsilon(double f_best, Rng& rng, double base = 10.0);

/// Improving over the current solution, or within the threshold of the best.
inline bool accept(double candidate, double current, double best, double epsilon) {
  return candidate < current || candidate < (1.0 + epsilon) * best;
}

/// Scores heuristics by the step-bests they achieve that beat every earlier
/// step-best.
class DominanceTracker {
 public:
  explicit DominanceTracker(int heuristics) : scores_(heuristics, 0) {}

  /// Records a greedy step's best objective and the heuristics reaching it;
  /// returns whether it is non-dominated.
  bool record_step(double best_f, const std::vector<int>& achievers);
  /// Heuristics with a positive score; all with score 1 if none scored.
  LlhPool pool() const;
  const std::vector<int>& scores() const { return scores_; }

 private:
  std::vector<int> scores_;
  std::optional<double> record_;
};

enum class ClockMode { wall, schedules };

struct LocalSearchConfig {
  ClockMode clock = ClockMode::wall;
  // Seconds, or generated schedules in schedule mode.
  double budget = 5.0;
  double reset_after = 1.0;
  double second_stage_after = 3.0;
  int second_stage_steps = 4;
  double log_base = 10.0;
  std::optional<LlhParams> params;  // defaults from the instance
  /// Wall-clock hard stop shared with the caller (e.g. the global budget).
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct TraceEvent {
  enum class Kind { accept, improve, reset, second_stage };
  long iteration;
  int heuristic;  // -1 for reset / second-stage events
  double f;
  double epsilon;
  Kind kind;
};

struct StepRecord {
  double best_f;
  std::vector<int> achievers;
  bool non_dominated;
  bool propagated;
};

struct SecondStageResult {
  SequenceSolution solution;  // last propagated
  double f = 0.0;
  Schedule schedule;
  bool improved = false;      // a propagated step beat the incoming best
  SequenceSolution best;
  double best_f = 0.0;
  Schedule best_schedule;
  LlhPool pool;
  std::vector<StepRecord> steps;
};

/// Greedy probing with every heuristic from `start` (objective f_start,
/// decoded `schedule`); `best_f` is the incoming best for the threshold rule.
/// `expired` is polled between invocations.
SecondStageResult second_stage(const SequenceSolution& start, double f_start, const Schedule& schedule,
                               double best_f, double epsilon, const std::vector<Heuristic>& catalogue,
                               const LlhParams& params, Evaluator& evaluator, Rng& rng, int steps,
                               const std::function<bool()>& expired);

struct LocalSearchResult {
  SequenceSolution best;
  double best_f = 0.0;
  Schedule best_schedule;
  long iterations = 0;
  int second_stages = 0;
  LlhPool pool;
};

LocalSearchResult local_search(const SequenceSolution& start, Evaluator& evaluator, Rng& rng,
                               const LocalSearchConfig& config, const std::vector<Heuristic>& catalogue,
                               std::vector<TraceEvent>* trace = nullptr);

}  // namespace mrcmpsp
