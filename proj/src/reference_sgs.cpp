#include "mrcmpsp/reference_sgs.hpp"

#include <algorithm>
#include <stdexcept>

#include "mrcmpsp/objectives.hpp"

namespace mrcmpsp {

Schedule reference_decode(const Instance& instance, const SequenceSolution& solution) {
  const int n = instance.num_activities();
  const Time horizon = instance.horizon();
  std::vector<std::vector<int>> global(instance.num_global());
  for (int k = 0; k < instance.num_global(); ++k)
    global[k].assign(horizon, instance.global_capacity()[k]);
  std::vector<std::vector<std::vector<int>>> local(instance.num_projects());
  for (int p = 0; p < instance.num_projects(); ++p)
    for (int cap : instance.project(p).local_renewable) local[p].emplace_back(horizon, cap);

  auto fits = [&](const Activity& a, const Mode& m, Time t) {
    for (Time s = t; s < t + m.duration; ++s) {
      for (int k = 0; k < instance.num_global(); ++k)
        if (m.global_renewable[k] > global[k][s]) return false;
      for (std::size_t k = 0; k < m.local_renewable.size(); ++k)
        if (m.local_renewable[k] > local[a.project][k][s]) return false;
    }
    return true;
  };

  Schedule s;
  s.start_times.assign(n, 0);
  s.modes = solution.modes;
  std::vector<bool> placed(n, false);
  for (ActivityId j : solution.permutation) {
    const Activity& a = instance.activity(j);
    const Mode& m = a.modes[solution.modes[j]];
    Time t = instance.project(a.project).release;
    for (ActivityId pred : a.predecessors) {
      if (!placed[pred]) throw std::logic_error("permutation violates precedence");
      t = std::max(t, s.start_times[pred] + instance.duration(pred, solution.modes[pred]));
    }
    while (true) {
      if (t + m.duration > horizon) throw std::runtime_error("reference decode exceeds horizon");
      if (fits(a, m, t)) break;
      ++t;
    }
    for (Time u = t; u < t + m.duration; ++u) {
      for (int k = 0; k < instance.num_global(); ++k) global[k][u] -= m.global_renewable[k];
      for (std::size_t k = 0; k < m.local_renewable.size(); ++k) local[a.project][k][u] -= m.local_renewable[k];
    }
    s.start_times[j] = t;
    placed[j] = true;
  }
  fill_objectives(instance, s);
  return s;
}

}  // namespace mrcmpsp
