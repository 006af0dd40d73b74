#include "mrcmpsp/model.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace mrcmpsp {

bool Activity::is_dummy() const {
  if (modes.size() != 1 || modes[0].duration != 0) return false;
  const Mode& m = modes[0];
  auto zero = [](const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
  };
  return zero(m.local_renewable) && zero(m.local_nonrenewable) && zero(m.global_renewable);
}

Instance::Instance(std::vector<Project> projects, std::vector<Activity> activities,
                   std::vector<int> global_capacity, Time horizon)
    : projects_(std::move(projects)),
      activities_(std::move(activities)),
      global_capacity_(std::move(global_capacity)),
      horizon_(horizon) {
  validate_and_link();
}

void Instance::validate_and_link() {
  const int n = num_activities();
  const int q = num_projects();
  if (horizon_ < 0) throw InstanceError("negative horizon");
  for (int c : global_capacity_)
    if (c < 0) throw InstanceError("negative global capacity");

  for (auto& p : projects_) {
    p.activities.clear();
    if (p.release < 0) throw InstanceError("negative release time");
    if (p.cpd < 0) throw InstanceError("negative critical path duration");
    for (int c : p.local_renewable)
      if (c < 0) throw InstanceError("negative renewable capacity");
    for (int c : p.local_nonrenewable)
      if (c < 0) throw InstanceError("negative non-renewable capacity");
  }

  for (auto& a : activities_) a.successors.clear();
  for (ActivityId j = 0; j < n; ++j) {
    Activity& a = activities_[j];
    if (a.project < 0 || a.project >= q)
      throw InstanceError("activity " + std::to_string(j) + " has no valid project");
    const Project& p = projects_[a.project];
    a.index_in_project = static_cast<int>(p.activities.size());
    projects_[a.project].activities.push_back(j);
    if (a.modes.empty()) throw InstanceError("activity " + std::to_string(j) + " has no modes");
    for (const Mode& m : a.modes) {
      if (m.duration < 0) throw InstanceError("negative duration");
      if (m.local_renewable.size() != p.local_renewable.size() ||
          m.local_nonrenewable.size() != p.local_nonrenewable.size() ||
          m.global_renewable.size() != global_capacity_.size())
        throw InstanceError("mode resource vector length mismatch for activity " +
                            std::to_string(j));
      for (std::size_t k = 0; k < m.local_renewable.size(); ++k)
        if (m.local_renewable[k] < 0 || m.local_renewable[k] > p.local_renewable[k])
          throw InstanceError("activity " + std::to_string(j) +
                              " demands more than a local renewable capacity");
      for (std::size_t k = 0; k < m.global_renewable.size(); ++k)
        if (m.global_renewable[k] < 0 || m.global_renewable[k] > global_capacity_[k])
          throw InstanceError("activity " + std::to_string(j) +
                              " demands more than a global renewable capacity");
      for (int r : m.local_nonrenewable)
        if (r < 0) throw InstanceError("negative non-renewable demand");
    }
    std::sort(a.predecessors.begin(), a.predecessors.end());
    a.predecessors.erase(std::unique(a.predecessors.begin(), a.predecessors.end()),
                         a.predecessors.end());
    for (ActivityId pred : a.predecessors) {
      if (pred < 0 || pred >= n || pred == j)
        throw InstanceError("invalid predecessor of activity " + std::to_string(j));
    }
  }
  for (ActivityId j = 0; j < n; ++j) {
    for (ActivityId pred : activities_[j].predecessors) {
      if (activities_[pred].project != activities_[j].project)
        throw InstanceError("cross-project precedence " + std::to_string(pred) + " -> " +
                            std::to_string(j));
      activities_[pred].successors.push_back(j);
    }
  }

  // Kahn's algorithm doubles as the acyclicity check.
  std::vector<int> indegree(n);
  for (ActivityId j = 0; j < n; ++j) indegree[j] = static_cast<int>(activities_[j].predecessors.size());
  std::queue<ActivityId> ready;
  for (ActivityId j = 0; j < n; ++j)
    if (indegree[j] == 0) ready.push(j);
  int seen = 0;
  while (!ready.empty()) {
    ActivityId j = ready.front();
    ready.pop();
    ++seen;
    for (ActivityId s : activities_[j].successors)
      if (--indegree[s] == 0) ready.push(s);
  }
  if (seen != n) throw InstanceError("precedence graph contains a cycle");

  lower_bound_ = 0;
  for (const auto& p : projects_) lower_bound_ += p.cpd + p.release;
}

int Instance::critical_path(ProjectId p) const {
  // Activities of a project are not necessarily topologically ordered in the
  // input, so relax in topological order.
  const auto& members = projects_[p].activities;
  std::vector<int> finish(num_activities(), 0);
  std::vector<int> indegree(num_activities(), 0);
  std::queue<ActivityId> ready;
  for (ActivityId j : members) {
    indegree[j] = static_cast<int>(activities_[j].predecessors.size());
    if (indegree[j] == 0) ready.push(j);
  }
  int best = 0;
  while (!ready.empty()) {
    ActivityId j = ready.front();
    ready.pop();
    int start = 0;
    for (ActivityId pred : activities_[j].predecessors) start = std::max(start, finish[pred]);
    int shortest = activities_[j].modes[0].duration;
    for (const Mode& m : activities_[j].modes) shortest = std::min(shortest, m.duration);
    finish[j] = start + shortest;
    best = std::max(best, finish[j]);
    for (ActivityId s : activities_[j].successors)
      if (--indegree[s] == 0) ready.push(s);
  }
  return best;
}

Time Instance::trivial_horizon() const {
  Time total = 0;
  for (const auto& p : projects_) total = std::max(total, p.release);
  for (const auto& a : activities_) {
    int longest = 0;
    for (const Mode& m : a.modes) longest = std::max(longest, m.duration);
    total += longest;
  }
  return total;
}

std::vector<int> positions_of(const SequenceSolution& solution) {
  std::vector<int> pos(solution.permutation.size());
  for (int i = 0; i < static_cast<int>(solution.permutation.size()); ++i)
    pos[solution.permutation[i]] = i;
  return pos;
}

std::vector<int> nonrenewable_usage(const Instance& instance, ProjectId p,
                                    const std::vector<ModeId>& modes) {
  const Project& project = instance.project(p);
  std::vector<int> used(project.local_nonrenewable.size(), 0);
  for (ActivityId j : project.activities) {
    const Mode& m = instance.activity(j).modes[modes[j]];
    for (std::size_t k = 0; k < used.size(); ++k) used[k] += m.local_nonrenewable[k];
  }
  return used;
}

bool modes_feasible(const Instance& instance, ProjectId p, const std::vector<ModeId>& modes) {
  const Project& project = instance.project(p);
  for (ActivityId j : project.activities) {
    if (modes[j] < 0 || modes[j] >= static_cast<int>(instance.activity(j).modes.size()))
      return false;
  }
  auto used = nonrenewable_usage(instance, p, modes);
  for (std::size_t k = 0; k < used.size(); ++k)
    if (used[k] > project.local_nonrenewable[k]) return false;
  return true;
}

bool modes_feasible(const Instance& instance, const std::vector<ModeId>& modes) {
  if (static_cast<int>(modes.size()) != instance.num_activities()) return false;
  for (ProjectId p = 0; p < instance.num_projects(); ++p)
    if (!modes_feasible(instance, p, modes)) return false;
  return true;
}

std::vector<std::string> check_sequence(const Instance& instance, const SequenceSolution& solution) {
  std::vector<std::string> problems;
  const int n = instance.num_activities();
  if (static_cast<int>(solution.permutation.size()) != n ||
      static_cast<int>(solution.modes.size()) != n) {
    problems.push_back("size mismatch");
    return problems;
  }
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    ActivityId j = solution.permutation[i];
    if (j < 0 || j >= n || pos[j] != -1) {
      problems.push_back("not a permutation at position " + std::to_string(i));
      return problems;
    }
    pos[j] = i;
  }
  for (ActivityId j = 0; j < n; ++j)
    for (ActivityId pred : instance.activity(j).predecessors)
      if (pos[pred] >= pos[j])
        problems.push_back("activity " + std::to_string(j) + " precedes its predecessor " +
                           std::to_string(pred));
  for (ActivityId j = 0; j < n; ++j) {
    int m = solution.modes[j];
    if (m < 0 || m >= static_cast<int>(instance.activity(j).modes.size()))
      problems.push_back("invalid mode for activity " + std::to_string(j));
  }
  if (problems.empty()) {
    for (ProjectId p = 0; p < instance.num_projects(); ++p)
      if (!modes_feasible(instance, p, solution.modes))
        problems.push_back("non-renewable capacity exceeded in project " + std::to_string(p));
  }
  return problems;
}

}  // namespace mrcmpsp
