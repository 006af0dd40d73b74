#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrcmpsp/model.hpp"
#include "mrcmpsp/rng.hpp"

namespace mrcmpsp {

/// Result of applying an operator in place. When `changed` is false the
/// solution is bit-identical to the input.
struct MoveOutcome {
  bool changed = false;
  int first_changed = 0;            // no permutation index before this one differs
  std::optional<double> objective;  // f of the result, when the operator evaluated it

  static MoveOutcome unchanged() { return {}; }
};

/// Decode + objective of a candidate solution.
using EvaluateFn = std::function<double(const SequenceSolution&)>;

struct PositionBounds {
  int lower;  // max predecessor position + 1, or 0
  int upper;  // min successor position - 1, or n - 1
};

/// Feasible range of a new position for j (0-based positions).
PositionBounds position_bounds(const Instance& instance, const std::vector<int>& pos, ActivityId j);

// Activity-level moves.
MoveOutcome swap_activities(const Instance& instance, SequenceSolution& s, Rng& rng);
MoveOutcome shift_activity(const Instance& instance, SequenceSolution& s, Rng& rng);
MoveOutcome change_mode(const Instance& instance, SequenceSolution& s, Rng& rng);

/// Applies the swap of the activities at positions a and b if both bounds allow it.
bool try_swap_positions(const Instance& instance, SequenceSolution& s, const std::vector<int>& pos, int a, int b);
/// Moves the activity at position from to position to (others keep their order).
void move_position(SequenceSolution& s, int from, int to);

/// First-improvement scans. `current_f` is the objective of the input.
MoveOutcome fils_swap(const Instance& instance, SequenceSolution& s, Rng& rng, int window,
                      const EvaluateFn& evaluate, double current_f);
MoveOutcome fils_shift(const Instance& instance, SequenceSolution& s, Rng& rng, int window,
                       const EvaluateFn& evaluate, double current_f);
MoveOutcome fils_change_mode(const Instance& instance, SequenceSolution& s, Rng& rng,
                             const EvaluateFn& evaluate, double current_f);

/// Window [l', u'] scanned by the FILS moves for activity bounds [lower, upper].
PositionBounds fils_window(PositionBounds bounds, int window, Rng& rng);

enum class SelectionStrategy { uniform, project, local, global, ending };
enum class ReshuffleKind { positions, modes, both };

const char* to_string(SelectionStrategy strategy);
const char* to_string(ReshuffleKind kind);

struct SelectionParams {
  SelectionStrategy strategy = SelectionStrategy::uniform;
  int cardinality = 2;
  double width = 1.0;                  // Local
  const Schedule* schedule = nullptr;  // decoded input, for Local and Global
  int max_attempts_per_pick = 1000;    // biased sampling falls back to uniform after this
};

/// Acceptance probability of j under the Local rule.
inline double local_probability(Time start, double tau, double width) {
  double dist = start > tau ? start - tau : tau - start;
  return 1.0 / (dist / width + 1.0);
}

/// Remaining global capacity per slot under `schedule`: [t * |G| + k].
std::vector<int> global_remaining(const Instance& instance, const Schedule& schedule);

std::vector<ActivityId> select_activities(const Instance& instance, const SequenceSolution& s, Rng& rng,
                                          const SelectionParams& params);

/// Backtracking refill of the positions of `chosen` in a random
/// precedence-feasible order. Returns the number of roll-backs.
long reinsert_positions(const Instance& instance, SequenceSolution& s, const std::vector<ActivityId>& chosen,
                        Rng& rng);

/// Random modes for `chosen`, retried until every affected project is
/// non-renewable feasible; keeps the old modes after `attempts` failures.
bool resample_modes(const Instance& instance, SequenceSolution& s, const std::vector<ActivityId>& chosen,
                    Rng& rng, int attempts = 100);

MoveOutcome reshuffle(const Instance& instance, SequenceSolution& s, Rng& rng, ReshuffleKind kind,
                      const SelectionParams& params);

// Project-level moves.
/// Projects sorted by mean position (ties by index).
std::vector<ProjectId> project_ordering(const Instance& instance, const SequenceSolution& s);

MoveOutcome swap_projects(const Instance& instance, SequenceSolution& s, ProjectId p1, ProjectId p2);
MoveOutcome swap_two_projects(const Instance& instance, SequenceSolution& s, Rng& rng);
MoveOutcome swap_neighbour_projects(const Instance& instance, SequenceSolution& s, Rng& rng);
MoveOutcome compress_project(const Instance& instance, SequenceSolution& s, ProjectId p, double x);
MoveOutcome compress_project(const Instance& instance, SequenceSolution& s, Rng& rng);
MoveOutcome shift_project(const Instance& instance, SequenceSolution& s, ProjectId p, int delta);
MoveOutcome shift_project(const Instance& instance, SequenceSolution& s, Rng& rng);

enum class FlushDirection { beginning, ending };
MoveOutcome flush_projects(const Instance& instance, SequenceSolution& s, Rng& rng, int count,
                           FlushDirection direction);

}  // namespace mrcmpsp
