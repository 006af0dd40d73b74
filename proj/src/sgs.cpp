#include "mrcmpsp/sgs.hpp"

#include <algorithm>

#include "mrcmpsp/objectives.hpp"

namespace mrcmpsp {

GeneratorWorkspace::GeneratorWorkspace(const Instance& instance, Time horizon_override)
    : instance_(&instance), horizon_(horizon_override > 0 ? horizon_override : instance.horizon()) {
  rows_ = instance.num_global();
  capacity_ = instance.global_capacity();
  for (const Project& p : instance.projects()) {
    local_offset_.push_back(rows_);
    rows_ += static_cast<int>(p.local_renewable.size());
    capacity_.insert(capacity_.end(), p.local_renewable.begin(), p.local_renewable.end());
  }
  remaining_.resize(static_cast<std::size_t>(horizon_) * rows_);
  reset_full();

  const int n = instance.num_activities();
  demand_begin_.push_back(0);
  for (ActivityId j = 0; j < n; ++j) {
    const Activity& a = instance.activity(j);
    mode_base_.push_back(static_cast<int>(duration_.size()));
    release_.push_back(instance.project(a.project).release);
    for (const Mode& m : a.modes) {
      duration_.push_back(m.duration);
      for (int k = 0; k < instance.num_global(); ++k)
        if (m.global_renewable[k] > 0) demands_.push_back({global_row(k), m.global_renewable[k]});
      for (int k = 0; k < static_cast<int>(m.local_renewable.size()); ++k)
        if (m.local_renewable[k] > 0) demands_.push_back({local_row(a.project, k), m.local_renewable[k]});
      demand_begin_.push_back(static_cast<int>(demands_.size()));
    }
  }
  schedule_.start_times.assign(n, 0);
  schedule_.modes.assign(n, 0);
  placed_stamp_.assign(n, 0);
}

void GeneratorWorkspace::reset_full() {
  for (std::size_t t = 0; t < static_cast<std::size_t>(horizon_); ++t)
    std::copy(capacity_.begin(), capacity_.end(), remaining_.begin() + t * rows_);
  dirty_horizon_ = 0;
  has_previous_ = false;
}

void GeneratorWorkspace::reset_incremental(Time last_makespan) {
  Time limit = std::min(horizon_, std::max<Time>(last_makespan, 0));
  for (std::size_t t = 0; t < static_cast<std::size_t>(limit); ++t)
    std::copy(capacity_.begin(), capacity_.end(), remaining_.begin() + t * rows_);
  if (limit >= dirty_horizon_) dirty_horizon_ = 0;
  has_previous_ = false;
}

void GeneratorWorkspace::allocate(ActivityId j, ModeId m, Time t) {
  const int k = key(j, m);
  const int d = duration_[k];
  if (t < 0 || t + d > horizon_) throw HorizonOverflow(horizon_);
  has_previous_ = false;
  place(j, m, t);
}

void GeneratorWorkspace::place(ActivityId j, ModeId m, Time t) {
  const int k = key(j, m);
  const int d = duration_[k];
  const Demand* first = demands_.data() + demand_begin_[k];
  const Demand* last = demands_.data() + demand_begin_[k + 1];
  for (const Demand* dm = first; dm != last; ++dm) {
    int* cell = remaining_.data() + static_cast<std::size_t>(t) * rows_ + dm->row;
    for (int s = 0; s < d; ++s, cell += rows_) *cell -= dm->amount;
  }
  dirty_horizon_ = std::max(dirty_horizon_, t + d);
}

void GeneratorWorkspace::unplace(ActivityId j, ModeId m, Time t) {
  const int k = key(j, m);
  const int d = duration_[k];
  const Demand* first = demands_.data() + demand_begin_[k];
  const Demand* last = demands_.data() + demand_begin_[k + 1];
  for (const Demand* dm = first; dm != last; ++dm) {
    int* cell = remaining_.data() + static_cast<std::size_t>(t) * rows_ + dm->row;
    for (int s = 0; s < d; ++s, cell += rows_) *cell += dm->amount;
  }
}

Time GeneratorWorkspace::test_slot_naive(ActivityId j, ModeId m, Time t) const {
  const int k = key(j, m);
  const int d = duration_[k];
  const Demand* first = demands_.data() + demand_begin_[k];
  const Demand* last = demands_.data() + demand_begin_[k + 1];
  std::uint64_t probes = 0;
  while (true) {
    if (t + d > horizon_) {
      probes_ += probes;
      throw HorizonOverflow(horizon_);
    }
    bool fits = true;
    for (Time s = t; s < t + d && fits; ++s) {
      ++probes;
      const int* slot = remaining_.data() + static_cast<std::size_t>(s) * rows_;
      for (const Demand* dm = first; dm != last; ++dm)
        if (dm->amount > slot[dm->row]) {
          fits = false;
          break;
        }
    }
    if (fits) break;
    ++t;
  }
  probes_ += probes;
  return t;
}

Time GeneratorWorkspace::test_slot_optimized(ActivityId j, ModeId m, Time t) const {
  const int k = key(j, m);
  const int d = duration_[k];
  const Demand* first = demands_.data() + demand_begin_[k];
  const Demand* last = demands_.data() + demand_begin_[k + 1];
  if (first == last) {
    if (t + d > horizon_) throw HorizonOverflow(horizon_);
    return t;
  }
  std::uint64_t probes = 0;
  // Slots (t-1, verified] already passed; after a jump they stay inside the
  // new window, so only the slots beyond them are probed.
  Time verified = t - 1;
  while (true) {
    if (t + d > horizon_) {
      probes_ += probes;
      throw HorizonOverflow(horizon_);
    }
    const Time end = t + d - 1;
    Time restart = -1;
    for (Time s = end; s > verified; --s) {
      ++probes;
      const int* slot = remaining_.data() + static_cast<std::size_t>(s) * rows_;
      for (const Demand* dm = first; dm != last; ++dm)
        if (dm->amount > slot[dm->row]) {
          restart = s + 1;
          break;
        }
      if (restart >= 0) break;
    }
    if (restart < 0) break;
    verified = end;
    t = restart;
  }
  probes_ += probes;
  return t;
}

const Schedule& GeneratorWorkspace::decode(const SequenceSolution& solution, const DecodeOptions& options) {
  const Instance& inst = *instance_;
  const int n = inst.num_activities();
  const auto& perm = solution.permutation;
  const auto& modes = solution.modes;

  if (++stamp_ == 0) {
    std::fill(placed_stamp_.begin(), placed_stamp_.end(), 0);
    stamp_ = 1;
  }

  int prefix = 0;
  if (options.prefix_reuse && has_previous_) {
    while (prefix < n && previous_permutation_[prefix] == perm[prefix] &&
           previous_modes_[perm[prefix]] == modes[perm[prefix]])
      ++prefix;
  }
  auto& start = schedule_.start_times;
  if (options.prefix_reuse && options.incremental_reset && has_previous_) {
    // Keep the prefix booked and give back only the previous suffix.
    for (int i = prefix; i < n; ++i) {
      const ActivityId j = previous_permutation_[i];
      unplace(j, previous_modes_[j], start[j]);
    }
  } else {
    if (options.incremental_reset)
      reset_incremental();
    else
      reset_full();
    for (int i = 0; i < prefix; ++i) {
      ActivityId j = perm[i];
      place(j, modes[j], start[j]);
    }
  }
  for (int i = 0; i < prefix; ++i) placed_stamp_[perm[i]] = stamp_;
  // A throw below leaves `start` partially overwritten; the cache is unusable.
  has_previous_ = false;
  for (int i = prefix; i < n; ++i) {
    ActivityId j = perm[i];
    const ModeId m = modes[j];
    Time t0 = release_[j];
    for (ActivityId pred : inst.activity(j).predecessors) {
      if (placed_stamp_[pred] != stamp_)
        throw std::logic_error("permutation violates precedence at position " + std::to_string(i));
      t0 = std::max(t0, start[pred] + duration_[key(pred, modes[pred])]);
    }
    Time t = options.search == SlotSearch::optimized ? test_slot_optimized(j, m, t0)
                                                     : test_slot_naive(j, m, t0);
    place(j, m, t);
    start[j] = t;
    placed_stamp_[j] = stamp_;
  }
  last_prefix_ = prefix;

  previous_permutation_ = perm;
  previous_modes_ = modes;
  has_previous_ = true;
  schedule_.modes = modes;
  fill_objectives(inst, schedule_);
  return schedule_;
}

Schedule decode(const Instance& instance, const SequenceSolution& solution,
                GeneratorWorkspace& workspace, SlotSearch search) {
  auto problems = check_sequence(instance, solution);
  if (!problems.empty()) throw std::invalid_argument("invalid sequence: " + problems.front());
  return workspace.decode(solution, {search, false, true});
}

Schedule decode_with_prefix(const Instance& instance, const SequenceSolution& solution,
                            GeneratorWorkspace& workspace) {
  (void)instance;
  return workspace.decode(solution, {SlotSearch::optimized, true, true});
}

double Evaluator::evaluate(const SequenceSolution& solution) {
  ++schedules_;
  return objective_of(workspace_.decode(solution, options_));
}

double Evaluator::objective_of(const Schedule& s) const {
  return combined_objective(s.tpd, s.tms, gamma_);
}

}  // namespace mrcmpsp
