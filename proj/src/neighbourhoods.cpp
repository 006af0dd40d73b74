#include "mrcmpsp/neighbourhoods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mrcmpsp {

namespace {

int first_difference(const std::vector<ActivityId>& a, const std::vector<ActivityId>& b) {
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin());
  return static_cast<int>(ia - a.begin());
}

MoveOutcome compare(const std::vector<ActivityId>& before, const SequenceSolution& after) {
  int d = first_difference(before, after.permutation);
  if (d == static_cast<int>(before.size())) return MoveOutcome::unchanged();
  return {true, d, std::nullopt};
}

ActivityId random_activity(const Instance& instance, Rng& rng) {
  return uniform_int(rng, 0, instance.num_activities() - 1);
}

bool project_modes_ok(const Instance& instance, ProjectId p, const std::vector<ModeId>& modes) {
  return modes_feasible(instance, p, modes);
}

}  // namespace

PositionBounds position_bounds(const Instance& instance, const std::vector<int>& pos, ActivityId j) {
  const Activity& a = instance.activity(j);
  PositionBounds b{0, static_cast<int>(pos.size()) - 1};
  for (ActivityId p : a.predecessors) b.lower = std::max(b.lower, pos[p] + 1);
  for (ActivityId s : a.successors) b.upper = std::min(b.upper, pos[s] - 1);
  return b;
}

bool try_swap_positions(const Instance& instance, SequenceSolution& s, const std::vector<int>& pos, int a,
                        int b) {
  ActivityId j1 = s.permutation[a], j2 = s.permutation[b];
  PositionBounds b1 = position_bounds(instance, pos, j1);
  PositionBounds b2 = position_bounds(instance, pos, j2);
  if (b < b1.lower || b > b1.upper || a < b2.lower || a > b2.upper) return false;
  std::swap(s.permutation[a], s.permutation[b]);
  return true;
}

void move_position(SequenceSolution& s, int from, int to) {
  auto& p = s.permutation;
  if (from < to)
    std::rotate(p.begin() + from, p.begin() + from + 1, p.begin() + to + 1);
  else if (to < from)
    std::rotate(p.begin() + to, p.begin() + from, p.begin() + from + 1);
}

MoveOutcome swap_activities(const Instance& instance, SequenceSolution& s, Rng& rng) {
  const auto pos = positions_of(s);
  ActivityId j1 = random_activity(instance, rng);
  PositionBounds b = position_bounds(instance, pos, j1);
  if (b.upper <= b.lower) return MoveOutcome::unchanged();
  // Uniform j2 != j1 with pos(j2) in [l, u].
  int p2 = uniform_int(rng, b.lower, b.upper - 1);
  if (p2 >= pos[j1]) ++p2;
  if (!try_swap_positions(instance, s, pos, pos[j1], p2)) return MoveOutcome::unchanged();
  return {true, std::min(pos[j1], p2), std::nullopt};
}

MoveOutcome shift_activity(const Instance& instance, SequenceSolution& s, Rng& rng) {
  const auto pos = positions_of(s);
  ActivityId j = random_activity(instance, rng);
  PositionBounds b = position_bounds(instance, pos, j);
  int to = uniform_int(rng, b.lower, b.upper);
  if (to == pos[j]) return MoveOutcome::unchanged();
  move_position(s, pos[j], to);
  return {true, std::min(to, pos[j]), std::nullopt};
}

MoveOutcome change_mode(const Instance& instance, SequenceSolution& s, Rng& rng) {
  ActivityId j = random_activity(instance, rng);
  const int count = static_cast<int>(instance.activity(j).modes.size());
  if (count == 1) return MoveOutcome::unchanged();
  ModeId old = s.modes[j];
  ModeId m = uniform_int(rng, 0, count - 2);
  if (m >= old) ++m;
  s.modes[j] = m;
  if (!project_modes_ok(instance, instance.activity(j).project, s.modes)) {
    s.modes[j] = old;
    return MoveOutcome::unchanged();
  }
  return {true, positions_of(s)[j], std::nullopt};
}

PositionBounds fils_window(PositionBounds bounds, int window, Rng& rng) {
  if (bounds.upper - bounds.lower < window) return bounds;
  int lo = uniform_int(rng, bounds.lower, bounds.upper - window + 1);
  return {lo, lo + window - 1};
}

MoveOutcome fils_swap(const Instance& instance, SequenceSolution& s, Rng& rng, int window,
                      const EvaluateFn& evaluate, double current_f) {
  const auto pos = positions_of(s);
  ActivityId j1 = random_activity(instance, rng);
  PositionBounds w = fils_window(position_bounds(instance, pos, j1), window, rng);
  const int a = pos[j1];
  for (int b = w.lower; b <= w.upper; ++b) {
    if (b == a) continue;
    if (!try_swap_positions(instance, s, pos, a, b)) continue;
    double f = evaluate(s);
    if (f < current_f) return {true, std::min(a, b), f};
    std::swap(s.permutation[a], s.permutation[b]);
  }
  return MoveOutcome::unchanged();
}

MoveOutcome fils_shift(const Instance& instance, SequenceSolution& s, Rng& rng, int window,
                       const EvaluateFn& evaluate, double current_f) {
  const auto pos = positions_of(s);
  ActivityId j = random_activity(instance, rng);
  PositionBounds w = fils_window(position_bounds(instance, pos, j), window, rng);
  const int a = pos[j];
  for (int b = w.lower; b <= w.upper; ++b) {
    if (b == a) continue;
    move_position(s, a, b);
    double f = evaluate(s);
    if (f < current_f) return {true, std::min(a, b), f};
    move_position(s, b, a);
  }
  return MoveOutcome::unchanged();
}

MoveOutcome fils_change_mode(const Instance& instance, SequenceSolution& s, Rng& rng,
                             const EvaluateFn& evaluate, double current_f) {
  ActivityId j = random_activity(instance, rng);
  const int count = static_cast<int>(instance.activity(j).modes.size());
  const ModeId old = s.modes[j];
  const ProjectId p = instance.activity(j).project;
  for (ModeId m = 0; m < count; ++m) {
    if (m == old) continue;
    s.modes[j] = m;
    if (project_modes_ok(instance, p, s.modes)) {
      double f = evaluate(s);
      if (f < current_f) return {true, positions_of(s)[j], f};
    }
    s.modes[j] = old;
  }
  return MoveOutcome::unchanged();
}

const char* to_string(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::uniform: return "uniform";
    case SelectionStrategy::project: return "project";
    case SelectionStrategy::local: return "local";
    case SelectionStrategy::global: return "global";
    case SelectionStrategy::ending: return "ending";
  }
  return "?";
}

const char* to_string(ReshuffleKind kind) {
  switch (kind) {
    case ReshuffleKind::positions: return "positions";
    case ReshuffleKind::modes: return "modes";
    case ReshuffleKind::both: return "both";
  }
  return "?";
}

std::vector<int> global_remaining(const Instance& instance, const Schedule& schedule) {
  const int g = instance.num_global();
  Time horizon = std::max(instance.horizon(), schedule.tms);
  std::vector<int> rem(static_cast<std::size_t>(horizon) * g);
  for (Time t = 0; t < horizon; ++t)
    for (int k = 0; k < g; ++k) rem[static_cast<std::size_t>(t) * g + k] = instance.global_capacity()[k];
  for (ActivityId j = 0; j < instance.num_activities(); ++j) {
    const Mode& m = instance.activity(j).modes[schedule.modes[j]];
    for (Time t = schedule.start_times[j]; t < schedule.start_times[j] + m.duration; ++t)
      for (int k = 0; k < g; ++k) rem[static_cast<std::size_t>(t) * g + k] -= m.global_renewable[k];
  }
  return rem;
}

namespace {

std::vector<ActivityId> sample_uniform(std::vector<ActivityId> pool, int k, Rng& rng) {
  k = std::min<int>(k, static_cast<int>(pool.size()));
  for (int i = 0; i < k; ++i) std::swap(pool[i], pool[uniform_int(rng, i, static_cast<int>(pool.size()) - 1)]);
  pool.resize(k);
  return pool;
}

/// Rejection sampling without replacement with per-activity acceptance p(j).
template <class Prob>
std::vector<ActivityId> sample_biased(int n, int k, Rng& rng, int max_attempts, Prob prob) {
  std::vector<ActivityId> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<ActivityId> out;
  k = std::min(k, n);
  while (static_cast<int>(out.size()) < k) {
    int attempts = 0;
    while (true) {
      int i = uniform_int(rng, 0, static_cast<int>(pool.size()) - 1);
      if (++attempts > max_attempts || bernoulli(rng, prob(pool[i]))) {
        out.push_back(pool[i]);
        pool[i] = pool.back();
        pool.pop_back();
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ActivityId> select_activities(const Instance& instance, const SequenceSolution& s, Rng& rng,
                                          const SelectionParams& params) {
  const int n = instance.num_activities();
  const int k = std::min(params.cardinality, n);
  switch (params.strategy) {
    case SelectionStrategy::uniform: {
      std::vector<ActivityId> all(n);
      std::iota(all.begin(), all.end(), 0);
      return sample_uniform(std::move(all), k, rng);
    }
    case SelectionStrategy::project: {
      ProjectId p = uniform_int(rng, 0, instance.num_projects() - 1);
      return sample_uniform(instance.project(p).activities, k, rng);
    }
    case SelectionStrategy::local: {
      if (!params.schedule) throw std::invalid_argument("local selection needs a schedule");
      const Schedule& d = *params.schedule;
      const double tau = uniform_int(rng, 0, d.tms);
      const double width = params.width > 0 ? params.width : 1.0;
      return sample_biased(n, k, rng, params.max_attempts_per_pick,
                           [&](ActivityId j) { return local_probability(d.start_times[j], tau, width); });
    }
    case SelectionStrategy::global: {
      if (!params.schedule) throw std::invalid_argument("global selection needs a schedule");
      const int g = instance.num_global();
      long total = 0;
      for (int c : instance.global_capacity()) total += c;
      if (g == 0 || total == 0) {
        std::vector<ActivityId> all(n);
        std::iota(all.begin(), all.end(), 0);
        return sample_uniform(std::move(all), k, rng);
      }
      const auto rem = global_remaining(instance, *params.schedule);
      const Time limit = static_cast<Time>(rem.size() / g);
      return sample_biased(n, k, rng, params.max_attempts_per_pick, [&](ActivityId j) {
        Time t = params.schedule->start_times[j];
        if (t < 0 || t >= limit) return 1.0;
        long free = 0;
        for (int r = 0; r < g; ++r) free += rem[static_cast<std::size_t>(t) * g + r];
        return static_cast<double>(free) / static_cast<double>(total);
      });
    }
    case SelectionStrategy::ending: {
      // Rank of j among its project's activities in sequence order, 1-based.
      std::vector<int> rank(n), seen(instance.num_projects(), 0);
      for (ActivityId j : s.permutation) rank[j] = ++seen[instance.activity(j).project];
      return sample_biased(n, k, rng, params.max_attempts_per_pick, [&](ActivityId j) {
        const auto size = instance.project(instance.activity(j).project).activities.size();
        return static_cast<double>(rank[j]) / static_cast<double>(size);
      });
    }
  }
  return {};
}

namespace {

struct Refill {
  const Instance& instance;
  Rng& rng;
  std::vector<int> gaps;
  std::vector<ActivityId> members;
  std::vector<int> lo, hi, indeg;
  std::vector<std::vector<int>> sub_succ;  // member index -> member indices
  std::vector<bool> used;
  std::vector<int> assignment;  // gap index -> member index
  long rollbacks = 0;

  bool viable(std::size_t next_gap) const {
    if (next_gap >= gaps.size()) return true;
    for (std::size_t m = 0; m < members.size(); ++m)
      if (!used[m] && hi[m] < gaps[next_gap]) return false;
    return true;
  }

  bool fill(std::size_t level) {
    if (level == gaps.size()) return true;
    std::vector<int> candidates;
    for (std::size_t m = 0; m < members.size(); ++m)
      if (!used[m] && indeg[m] == 0 && lo[m] <= gaps[level] && gaps[level] <= hi[m])
        candidates.push_back(static_cast<int>(m));
    std::shuffle(candidates.begin(), candidates.end(), rng);
    for (int m : candidates) {
      used[m] = true;
      for (int t : sub_succ[m]) --indeg[t];
      assignment[level] = m;
      if (viable(level + 1) && fill(level + 1)) return true;
      for (int t : sub_succ[m]) ++indeg[t];
      used[m] = false;
      ++rollbacks;
    }
    return false;
  }
};

}  // namespace

long reinsert_positions(const Instance& instance, SequenceSolution& s, const std::vector<ActivityId>& chosen,
                        Rng& rng) {
  if (chosen.size() < 2) return 0;
  const auto pos = positions_of(s);
  const int n = instance.num_activities();
  Refill r{instance, rng, {}, chosen, {}, {}, {}, {}, {}, {}, 0};
  const std::size_t k = chosen.size();
  std::vector<int> member_of(n, -1);
  for (std::size_t m = 0; m < k; ++m) {
    member_of[chosen[m]] = static_cast<int>(m);
    r.gaps.push_back(pos[chosen[m]]);
  }
  std::sort(r.gaps.begin(), r.gaps.end());
  r.lo.assign(k, 0);
  r.hi.assign(k, n - 1);
  r.indeg.assign(k, 0);
  r.sub_succ.assign(k, {});
  r.used.assign(k, false);
  r.assignment.assign(k, -1);
  for (std::size_t m = 0; m < k; ++m) {
    const Activity& a = instance.activity(chosen[m]);
    for (ActivityId p : a.predecessors) {
      if (member_of[p] >= 0) {
        ++r.indeg[m];
        r.sub_succ[member_of[p]].push_back(static_cast<int>(m));
      } else {
        r.lo[m] = std::max(r.lo[m], pos[p] + 1);
      }
    }
    for (ActivityId t : a.successors)
      if (member_of[t] < 0) r.hi[m] = std::min(r.hi[m], pos[t] - 1);
  }
  if (!r.fill(0)) throw std::logic_error("no feasible re-insertion found");
  for (std::size_t i = 0; i < k; ++i) s.permutation[r.gaps[i]] = chosen[r.assignment[i]];
  return r.rollbacks;
}

bool resample_modes(const Instance& instance, SequenceSolution& s, const std::vector<ActivityId>& chosen,
                    Rng& rng, int attempts) {
  std::vector<ModeId> old;
  std::vector<ProjectId> projects;
  for (ActivityId j : chosen) {
    old.push_back(s.modes[j]);
    projects.push_back(instance.activity(j).project);
  }
  std::sort(projects.begin(), projects.end());
  projects.erase(std::unique(projects.begin(), projects.end()), projects.end());
  for (int a = 0; a < attempts; ++a) {
    for (ActivityId j : chosen)
      s.modes[j] = uniform_int(rng, 0, static_cast<int>(instance.activity(j).modes.size()) - 1);
    bool ok = std::all_of(projects.begin(), projects.end(),
                          [&](ProjectId p) { return project_modes_ok(instance, p, s.modes); });
    if (ok) return true;
  }
  for (std::size_t i = 0; i < chosen.size(); ++i) s.modes[chosen[i]] = old[i];
  return false;
}

MoveOutcome reshuffle(const Instance& instance, SequenceSolution& s, Rng& rng, ReshuffleKind kind,
                      const SelectionParams& params) {
  auto chosen = select_activities(instance, s, rng, params);
  if (chosen.empty()) return MoveOutcome::unchanged();
  const std::vector<ActivityId> before = s.permutation;
  std::vector<ModeId> old_modes;
  for (ActivityId j : chosen) old_modes.push_back(s.modes[j]);

  if (kind != ReshuffleKind::modes) reinsert_positions(instance, s, chosen, rng);
  if (kind != ReshuffleKind::positions) resample_modes(instance, s, chosen, rng);

  int first = first_difference(before, s.permutation);
  const auto pos = positions_of(s);
  bool modes_changed = false;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    if (s.modes[chosen[i]] != old_modes[i]) {
      modes_changed = true;
      first = std::min(first, pos[chosen[i]]);
    }
  if (!modes_changed && first == static_cast<int>(before.size())) return MoveOutcome::unchanged();
  return {true, first, std::nullopt};
}

std::vector<ProjectId> project_ordering(const Instance& instance, const SequenceSolution& s) {
  const int q = instance.num_projects();
  std::vector<long> sum(q, 0);
  for (std::size_t i = 0; i < s.permutation.size(); ++i) sum[instance.activity(s.permutation[i]).project] += static_cast<long>(i);
  std::vector<ProjectId> order(q);
  std::iota(order.begin(), order.end(), 0);
  auto size = [&](ProjectId p) { return static_cast<long>(instance.project(p).activities.size()); };
  // centre(a) < centre(b) compared exactly: sum_a * |b| < sum_b * |a|.
  std::stable_sort(order.begin(), order.end(), [&](ProjectId a, ProjectId b) {
    return sum[a] * size(b) < sum[b] * size(a);
  });
  return order;
}

MoveOutcome swap_projects(const Instance& instance, SequenceSolution& s, ProjectId p1, ProjectId p2) {
  const std::vector<ActivityId> before = s.permutation;
  std::vector<int> slots;
  std::vector<ActivityId> first, second;
  for (std::size_t i = 0; i < before.size(); ++i) {
    ProjectId p = instance.activity(before[i]).project;
    if (p == p1) first.push_back(before[i]);
    if (p == p2) second.push_back(before[i]);
    if (p == p1 || p == p2) slots.push_back(static_cast<int>(i));
  }
  std::size_t c = 0;
  for (ActivityId j : second) s.permutation[slots[c++]] = j;
  for (ActivityId j : first) s.permutation[slots[c++]] = j;
  return compare(before, s);
}

MoveOutcome swap_two_projects(const Instance& instance, SequenceSolution& s, Rng& rng) {
  const int q = instance.num_projects();
  if (q < 2) return MoveOutcome::unchanged();
  ProjectId p1 = uniform_int(rng, 0, q - 1);
  ProjectId p2 = uniform_int(rng, 0, q - 2);
  if (p2 >= p1) ++p2;
  return swap_projects(instance, s, p1, p2);
}

MoveOutcome swap_neighbour_projects(const Instance& instance, SequenceSolution& s, Rng& rng) {
  const int q = instance.num_projects();
  if (q < 2) return MoveOutcome::unchanged();
  auto order = project_ordering(instance, s);
  int i = uniform_int(rng, 0, q - 2);
  return swap_projects(instance, s, order[i], order[i + 1]);
}

MoveOutcome compress_project(const Instance& instance, SequenceSolution& s, ProjectId p, double x) {
  const std::vector<ActivityId> before = s.permutation;
  std::vector<ActivityId> members, rest;
  for (ActivityId j : before) (instance.activity(j).project == p ? members : rest).push_back(j);
  const int reduced = static_cast<int>(rest.size());
  int at = static_cast<int>(std::ceil(x * reduced));
  at = std::clamp(at, 0, reduced);
  s.permutation.clear();
  s.permutation.insert(s.permutation.end(), rest.begin(), rest.begin() + at);
  s.permutation.insert(s.permutation.end(), members.begin(), members.end());
  s.permutation.insert(s.permutation.end(), rest.begin() + at, rest.end());
  return compare(before, s);
}

MoveOutcome compress_project(const Instance& instance, SequenceSolution& s, Rng& rng) {
  ProjectId p = uniform_int(rng, 0, instance.num_projects() - 1);
  return compress_project(instance, s, p, uniform_real(rng));
}

MoveOutcome shift_project(const Instance& instance, SequenceSolution& s, ProjectId p, int delta) {
  const std::vector<ActivityId> before = s.permutation;
  const int n = static_cast<int>(before.size());
  std::vector<ActivityId> members, rest;
  std::vector<int> taken(n, 0);
  for (int i = 0; i < n; ++i) {
    if (instance.activity(before[i]).project == p) {
      members.push_back(before[i]);
      int to = i + delta;
      if (to < 0 || to >= n) throw std::invalid_argument("project shift out of range");
      taken[to] = 1;
    } else {
      rest.push_back(before[i]);
    }
  }
  std::size_t mi = 0, ri = 0;
  for (int i = 0; i < n; ++i) s.permutation[i] = taken[i] ? members[mi++] : rest[ri++];
  return compare(before, s);
}

MoveOutcome shift_project(const Instance& instance, SequenceSolution& s, Rng& rng) {
  ProjectId p = uniform_int(rng, 0, instance.num_projects() - 1);
  const int n = static_cast<int>(s.permutation.size());
  int lo = n, hi = -1;
  for (int i = 0; i < n; ++i)
    if (instance.activity(s.permutation[i]).project == p) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  const int min_delta = -lo, max_delta = n - 1 - hi;
  if (min_delta == 0 && max_delta == 0) return MoveOutcome::unchanged();
  // Uniform over the non-zero offsets.
  int delta = uniform_int(rng, min_delta, max_delta - 1);
  if (delta >= 0) ++delta;
  return shift_project(instance, s, p, delta);
}

MoveOutcome flush_projects(const Instance& instance, SequenceSolution& s, Rng& rng, int count,
                           FlushDirection direction) {
  const int q = instance.num_projects();
  if (count < 1 || count >= q) return MoveOutcome::unchanged();
  auto order = project_ordering(instance, s);
  int first = uniform_int(rng, 0, q - count);
  std::vector<bool> flushed(q, false);
  for (int i = first; i < first + count; ++i) flushed[order[i]] = true;
  const std::vector<ActivityId> before = s.permutation;
  std::vector<ActivityId> moved, rest;
  for (ActivityId j : before) (flushed[instance.activity(j).project] ? moved : rest).push_back(j);
  s.permutation.clear();
  if (direction == FlushDirection::beginning) {
    s.permutation.insert(s.permutation.end(), moved.begin(), moved.end());
    s.permutation.insert(s.permutation.end(), rest.begin(), rest.end());
  } else {
    s.permutation.insert(s.permutation.end(), rest.begin(), rest.end());
    s.permutation.insert(s.permutation.end(), moved.begin(), moved.end());
  }
  return compare(before, s);
}

}  // namespace mrcmpsp
