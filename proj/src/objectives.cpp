#include "mrcmpsp/objectives.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mrcmpsp {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::release_time: return "release time";
    case ViolationKind::nonrenewable: return "non-renewable capacity";
    case ViolationKind::local_renewable: return "local renewable capacity";
    case ViolationKind::global_renewable: return "global renewable capacity";
    case ViolationKind::precedence: return "precedence";
    case ViolationKind::mode: return "mode";
  }
  return "unknown";
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << to_string(kind);
  if (activity >= 0) out << " activity=" << activity;
  if (other >= 0) out << " predecessor=" << other;
  if (project >= 0) out << " project=" << project;
  if (resource >= 0) out << " resource=" << resource;
  if (time >= 0) out << " time=" << time;
  return out.str();
}

FeasibilityReport is_feasible(const Instance& instance, const Schedule& schedule) {
  const int n = instance.num_activities();
  if (static_cast<int>(schedule.start_times.size()) != n ||
      static_cast<int>(schedule.modes.size()) != n)
    throw std::invalid_argument("schedule size does not match instance");

  FeasibilityReport report;
  auto& out = report.violations;

  // Modes must be valid before any resource arithmetic.
  bool modes_ok = true;
  for (ActivityId j = 0; j < n; ++j) {
    int m = schedule.modes[j];
    if (m < 0 || m >= static_cast<int>(instance.activity(j).modes.size())) {
      out.push_back({ViolationKind::mode, j});
      modes_ok = false;
    }
  }
  if (!modes_ok) return report;

  for (ActivityId j = 0; j < n; ++j) {
    const Activity& a = instance.activity(j);
    if (schedule.start_times[j] < instance.project(a.project).release)
      out.push_back({ViolationKind::release_time, j, -1, a.project});
  }

  for (ProjectId p = 0; p < instance.num_projects(); ++p) {
    auto used = nonrenewable_usage(instance, p, schedule.modes);
    for (std::size_t k = 0; k < used.size(); ++k)
      if (used[k] > instance.project(p).local_nonrenewable[k])
        out.push_back({ViolationKind::nonrenewable, -1, -1, p, static_cast<int>(k)});
  }

  Time makespan = 0;
  for (ActivityId j = 0; j < n; ++j)
    makespan = std::max(makespan, schedule.start_times[j] + instance.duration(j, schedule.modes[j]));
  Time earliest = 0;
  for (ActivityId j = 0; j < n; ++j) earliest = std::min(earliest, schedule.start_times[j]);
  const Time span = makespan - earliest;

  // Per-slot usage profiles, offset so negative start times still index.
  for (ProjectId p = 0; p < instance.num_projects(); ++p) {
    const Project& project = instance.project(p);
    for (std::size_t k = 0; k < project.local_renewable.size(); ++k) {
      std::vector<int> usage(span, 0);
      for (ActivityId j : project.activities) {
        const Mode& m = instance.activity(j).modes[schedule.modes[j]];
        for (Time t = schedule.start_times[j]; t < schedule.start_times[j] + m.duration; ++t)
          usage[t - earliest] += m.local_renewable[k];
      }
      for (Time t = 0; t < span; ++t)
        if (usage[t] > project.local_renewable[k])
          out.push_back({ViolationKind::local_renewable, -1, -1, p, static_cast<int>(k), t + earliest});
    }
  }
  for (int k = 0; k < instance.num_global(); ++k) {
    std::vector<int> usage(span, 0);
    for (ActivityId j = 0; j < n; ++j) {
      const Mode& m = instance.activity(j).modes[schedule.modes[j]];
      for (Time t = schedule.start_times[j]; t < schedule.start_times[j] + m.duration; ++t)
        usage[t - earliest] += m.global_renewable[k];
    }
    for (Time t = 0; t < span; ++t)
      if (usage[t] > instance.global_capacity()[k])
        out.push_back({ViolationKind::global_renewable, -1, -1, -1, k, t + earliest});
  }

  for (ActivityId j = 0; j < n; ++j)
    for (ActivityId pred : instance.activity(j).predecessors)
      if (schedule.start_times[j] <
          schedule.start_times[pred] + instance.duration(pred, schedule.modes[pred]))
        out.push_back({ViolationKind::precedence, j, pred, instance.activity(j).project});

  return report;
}

void fill_objectives(const Instance& instance, Schedule& schedule) {
  schedule.project_completions.assign(instance.num_projects(), 0);
  schedule.tms = 0;
  for (ActivityId j = 0; j < instance.num_activities(); ++j) {
    Time finish = schedule.start_times[j] + instance.duration(j, schedule.modes[j]);
    Time& c = schedule.project_completions[instance.activity(j).project];
    c = std::max(c, finish);
    schedule.tms = std::max(schedule.tms, finish);
  }
  schedule.tpc = 0;
  for (Time c : schedule.project_completions) schedule.tpc += c;
  schedule.tpd = schedule.tpc - instance.lower_bound();
}

Objectives objectives(const Instance& instance, const Schedule& schedule, double gamma) {
  Schedule copy = schedule;
  fill_objectives(instance, copy);
  return {copy.tpd, copy.tms, combined_objective(copy.tpd, copy.tms, gamma)};
}

}  // namespace mrcmpsp
