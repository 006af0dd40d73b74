#include "support.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "mrcmpsp/instance_io.hpp"
#include "mrcmpsp/synthetic.hpp"

namespace mrcmpsp::testing {

ProjectId Builder::project(Time release, std::vector<int> local_renewable, std::vector<int> local_nonrenewable) {
  Project p;
  p.release = release;
  p.local_renewable = std::move(local_renewable);
  p.local_nonrenewable = std::move(local_nonrenewable);
  projects_.push_back(std::move(p));
  return static_cast<ProjectId>(projects_.size()) - 1;
}

ActivityId Builder::activity(ProjectId p, std::vector<Mode> modes, std::vector<ActivityId> predecessors) {
  Activity a;
  a.project = p;
  a.predecessors = std::move(predecessors);
  for (Mode& m : modes) {
    m.local_renewable.resize(projects_[p].local_renewable.size(), 0);
    m.local_nonrenewable.resize(projects_[p].local_nonrenewable.size(), 0);
    m.global_renewable.resize(globals_.size(), 0);
  }
  a.modes = std::move(modes);
  activities_.push_back(std::move(a));
  return static_cast<ActivityId>(activities_.size()) - 1;
}

Instance Builder::build(Time horizon) const {
  Instance draft(projects_, activities_, globals_, 1);
  std::vector<Project> projects = projects_;
  for (ProjectId p = 0; p < draft.num_projects(); ++p) projects[p].cpd = draft.critical_path(p);
  Instance sized(projects, activities_, globals_, 1);
  return Instance(projects, activities_, globals_, horizon > 0 ? horizon : sized.trivial_horizon());
}

Mode mode(int duration, std::vector<int> local_renewable, std::vector<int> global_renewable,
          std::vector<int> local_nonrenewable) {
  Mode m;
  m.duration = duration;
  m.local_renewable = std::move(local_renewable);
  m.global_renewable = std::move(global_renewable);
  m.local_nonrenewable = std::move(local_nonrenewable);
  return m;
}

std::string data_path(const std::string& relative) { return std::string(MRCMPSP_DATA_DIR) + "/" + relative; }

const Instance& data_instance(const std::string& name) {
  static std::map<std::string, std::unique_ptr<Instance>> cache;
  auto& slot = cache[name];
  if (!slot) slot = std::make_unique<Instance>(load_instance(data_path("syn-" + name + ".mpc")));
  return *slot;
}

const Instance& j30_instance(int index) {
  static std::map<int, std::unique_ptr<Instance>> cache;
  auto& slot = cache[index];
  if (!slot) slot = std::make_unique<Instance>(load_instance(data_path("syn-j30/j30_" + std::to_string(index) + ".mm")));
  return *slot;
}

std::vector<std::string> table_names(char group) {
  std::vector<std::string> names;
  for (const auto& r : table_recipes())
    if (r.name.front() == group) names.push_back(r.name);
  return names;
}

int earlier_start_available(const Instance& instance, const Schedule& schedule) {
  const int n = instance.num_activities();
  Time end = 0;
  for (ActivityId j = 0; j < n; ++j) end = std::max(end, schedule.start_times[j] + instance.duration(j, schedule.modes[j]));
  // usage[r][t]: globals first, then each project's locals.
  std::vector<int> offset;
  int rows = instance.num_global();
  for (const Project& p : instance.projects()) {
    offset.push_back(rows);
    rows += static_cast<int>(p.local_renewable.size());
  }
  std::vector<std::vector<int>> usage(rows, std::vector<int>(end + 1, 0));
  std::vector<int> cap(rows);
  for (int k = 0; k < instance.num_global(); ++k) cap[k] = instance.global_capacity()[k];
  for (ProjectId p = 0; p < instance.num_projects(); ++p)
    for (std::size_t k = 0; k < instance.project(p).local_renewable.size(); ++k)
      cap[offset[p] + k] = instance.project(p).local_renewable[k];

  auto demands = [&](ActivityId j) {
    std::vector<std::pair<int, int>> d;
    const Activity& a = instance.activity(j);
    const Mode& m = a.modes[schedule.modes[j]];
    for (int k = 0; k < instance.num_global(); ++k) d.push_back({k, m.global_renewable[k]});
    for (std::size_t k = 0; k < m.local_renewable.size(); ++k) d.push_back({offset[a.project] + static_cast<int>(k), m.local_renewable[k]});
    return d;
  };
  for (ActivityId j = 0; j < n; ++j) {
    const Time s = schedule.start_times[j];
    for (auto [r, amount] : demands(j))
      for (Time t = s; t < s + instance.duration(j, schedule.modes[j]); ++t) usage[r][t] += amount;
  }

  for (ActivityId j = 0; j < n; ++j) {
    const Activity& a = instance.activity(j);
    const Time s = schedule.start_times[j];
    const int d = instance.duration(j, schedule.modes[j]);
    Time earliest = instance.project(a.project).release;
    for (ActivityId p : a.predecessors) earliest = std::max(earliest, schedule.start_times[p] + instance.duration(p, schedule.modes[p]));
    auto dem = demands(j);
    for (auto [r, amount] : dem)
      for (Time t = s; t < s + d; ++t) usage[r][t] -= amount;
    bool found = false;
    for (Time t = earliest; t < s && !found; ++t) {
      bool fits = true;
      for (auto [r, amount] : dem)
        for (Time u = t; u < t + d && fits; ++u)
          if (usage[r][u] + amount > cap[r]) fits = false;
      found = fits;
    }
    for (auto [r, amount] : dem)
      for (Time t = s; t < s + d; ++t) usage[r][t] += amount;
    if (found) return j;
  }
  return -1;
}

Instance random_small_instance(Rng& rng, int projects, int jobs_per_project, int globals) {
  std::vector<int> gcap;
  for (int k = 0; k < globals; ++k) gcap.push_back(uniform_int(rng, 2, 5));
  Builder b(gcap);
  for (int p = 0; p < projects; ++p) {
    const int nonrenewable_cap = uniform_int(rng, 3 * jobs_per_project, 4 * jobs_per_project);
    ProjectId id = b.project(uniform_int(rng, 0, 4), {uniform_int(rng, 2, 5)}, {nonrenewable_cap});
    std::vector<ActivityId> mine;
    for (int j = 0; j < jobs_per_project; ++j) {
      std::vector<ActivityId> preds;
      for (ActivityId prev : mine)
        if (bernoulli(rng, 0.25)) preds.push_back(prev);
      std::vector<Mode> modes;
      const int count = uniform_int(rng, 1, 3);
      for (int m = 0; m < count; ++m) {
        std::vector<int> g;
        for (int k = 0; k < globals; ++k) g.push_back(uniform_int(rng, 0, gcap[k]));
        modes.push_back(mode(uniform_int(rng, 0, 6), {uniform_int(rng, 0, 2)}, g, {uniform_int(rng, 0, 3)}));
      }
      mine.push_back(b.activity(id, std::move(modes), std::move(preds)));
    }
  }
  return b.build();
}

}  // namespace mrcmpsp::testing
