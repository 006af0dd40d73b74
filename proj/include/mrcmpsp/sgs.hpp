#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mrcmpsp/model.hpp"

namespace mrcmpsp {

/// A slot search ran past the preallocated timeline.
class HorizonOverflow : public std::runtime_error {
 public:
  explicit HorizonOverflow(Time horizon)
      : std::runtime_error("schedule exceeds the time horizon T_max=" + std::to_string(horizon) +
                           " (use --horizon to enlarge it)"),
        horizon_(horizon) {}
  Time horizon() const { return horizon_; }

 private:
  Time horizon_;
};

enum class SlotSearch { naive, optimized };

struct DecodeOptions {
  SlotSearch search = SlotSearch::optimized;
  bool prefix_reuse = true;
  bool incremental_reset = true;

  static DecodeOptions plain_naive() { return {SlotSearch::naive, false, false}; }
};

/// Reusable per-worker state of the serial schedule generator: remaining
/// capacity of every renewable resource (globals first, then each project's
/// locals) for every slot of [0, T_max), plus the previous decode for prefix
/// reuse. Not shareable between threads.
class GeneratorWorkspace {
 public:
  explicit GeneratorWorkspace(const Instance& instance, Time horizon_override = 0);

  /// Serial SGS. Places every activity of the permutation, in order, at the
  /// earliest feasible slot. The result stays valid until the next decode.
  const Schedule& decode(const SequenceSolution& solution, const DecodeOptions& options = {});

  /// Earliest t' >= t at which activity j in mode m fits the current
  /// capacities. Naive rescans from t+1 on a shortfall; optimized scans the
  /// window backwards and jumps past the failing slot.
  Time test_slot_naive(ActivityId j, ModeId m, Time t) const;
  Time test_slot_optimized(ActivityId j, ModeId m, Time t) const;

  /// Books j's demand on [t, t + d). Exposed for tests that build a state.
  void allocate(ActivityId j, ModeId m, Time t);

  /// With prefix reuse and incremental reset together, decode keeps the
  /// common prefix booked and releases only the previous suffix instead.

  /// Restores full capacity on [0, last_makespan); later slots are untouched.
  void reset_incremental(Time last_makespan);
  /// Same, using the furthest slot written since the last reset.
  void reset_incremental() { reset_incremental(dirty_horizon_); }
  void reset_full();

  /// Drops the cached previous decode so the next decode cannot reuse a prefix.
  void forget_previous() { has_previous_ = false; }

  int remaining(int row, Time t) const { return remaining_[static_cast<std::size_t>(t) * rows_ + row]; }
  int capacity(int row) const { return capacity_[row]; }
  int num_rows() const { return rows_; }
  int global_row(int k) const { return k; }
  int local_row(ProjectId p, int k) const { return local_offset_[p] + k; }
  Time horizon() const { return horizon_; }
  Time dirty_horizon() const { return dirty_horizon_; }

  const Schedule& last() const { return schedule_; }
  /// Activities re-placed from the cached previous decode during the last call.
  int last_prefix_length() const { return last_prefix_; }
  /// Slots inspected by slot searches (one per slot probed).
  std::uint64_t probes() const { return probes_; }
  void reset_probes() { probes_ = 0; }

  const Instance& instance() const { return *instance_; }

 private:
  struct Demand {
    int row;
    int amount;
  };

  int key(ActivityId j, ModeId m) const { return mode_base_[j] + m; }
  void place(ActivityId j, ModeId m, Time t);
  void unplace(ActivityId j, ModeId m, Time t);

  const Instance* instance_;
  Time horizon_;
  int rows_ = 0;
  std::vector<int> local_offset_;
  std::vector<int> capacity_;
  std::vector<int> remaining_;  // time-major: [t * rows_ + row]
  Time dirty_horizon_ = 0;

  std::vector<int> mode_base_;
  std::vector<int> duration_;
  std::vector<int> demand_begin_;
  std::vector<Demand> demands_;
  std::vector<Time> release_;

  bool has_previous_ = false;
  std::vector<ActivityId> previous_permutation_;
  std::vector<ModeId> previous_modes_;
  Schedule schedule_;
  std::vector<std::uint32_t> placed_stamp_;
  std::uint32_t stamp_ = 0;
  int last_prefix_ = 0;
  mutable std::uint64_t probes_ = 0;
};

/// Full decode without prefix reuse, validating the solution first (throws
/// std::invalid_argument on a precedence- or capacity-infeasible input).
Schedule decode(const Instance& instance, const SequenceSolution& solution,
                GeneratorWorkspace& workspace, SlotSearch search = SlotSearch::optimized);

/// Decode reusing the maximal common prefix with the workspace's previous call.
Schedule decode_with_prefix(const Instance& instance, const SequenceSolution& solution,
                            GeneratorWorkspace& workspace);

/// Workspace plus objective weighting; counts every generated schedule.
class Evaluator {
 public:
  explicit Evaluator(const Instance& instance, DecodeOptions options = {}, Time horizon_override = 0)
      : workspace_(instance, horizon_override), options_(options) {}

  /// Decodes and returns f = tpd + gamma * tms.
  double evaluate(const SequenceSolution& solution);
  double objective_of(const Schedule& s) const;

  const Schedule& schedule() const { return workspace_.last(); }
  const Instance& instance() const { return workspace_.instance(); }
  GeneratorWorkspace& workspace() { return workspace_; }

  double gamma() const { return gamma_; }
  void set_gamma(double gamma) { gamma_ = gamma; }
  std::uint64_t schedules() const { return schedules_; }

 private:
  GeneratorWorkspace workspace_;
  DecodeOptions options_;
  double gamma_ = 0.0;
  std::uint64_t schedules_ = 0;
};

}  // namespace mrcmpsp
