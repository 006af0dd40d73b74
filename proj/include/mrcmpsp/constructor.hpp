#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mrcmpsp/model.hpp"
#include "mrcmpsp/rng.hpp"

namespace mrcmpsp {

/// No feasible mode assignment was found within the repair budget.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProjectPartition {
  std::vector<ProjectId> start, middle, end;

  bool operator==(const ProjectPartition&) const = default;
};

/// Part sizes for q projects: equal, extra projects go to start, then middle.
struct PartSizes {
  int start, middle, end;
};
PartSizes part_sizes(int q);

struct RepairBudget {
  int flips_per_activity = 50;
  int restarts = 20;
};

/// Non-renewable overuse of project p: sum over resources of max(0, use - cap).
int shortfall(const Instance& instance, ProjectId p, const std::vector<ModeId>& modes);

/// Mode local search on project p: random single-activity flips, kept when the
/// shortfall does not increase; restarts from random modes when a round runs
/// out. Returns the number of flips tried. Throws ConstructionError.
int repair_modes(const Instance& instance, ProjectId p, std::vector<ModeId>& modes, Rng& rng,
                 const RepairBudget& budget = {});

/// Random precedence-feasible order, part by part, with repaired random modes.
SequenceSolution rollout(const Instance& instance, const ProjectPartition& partition, Rng& rng,
                         const RepairBudget& budget = {});

/// Rollout with every project in a single part.
SequenceSolution random_solution(const Instance& instance, Rng& rng, const RepairBudget& budget = {});

/// Nearest-rank percentile: the ceil(fraction * N)-th smallest value.
double nearest_rank_percentile(std::vector<double> values, double fraction);

struct ConstructorConfig {
  int candidates = 100;
  int rollouts = 120;
  double percentile = 0.25;
  RepairBudget repair;
};

struct ConstructionResult {
  ProjectPartition partition;
  SequenceSolution best;
  double best_f = 0.0;
  std::uint64_t schedules = 0;
};

/// Two-stage sampled partition search. Rollouts run in parallel; every random
/// draw derives from `seed`, so results do not depend on the thread count.
ConstructionResult construct(const Instance& instance, std::uint64_t seed, const ConstructorConfig& config = {});

}  // namespace mrcmpsp
