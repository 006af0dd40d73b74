#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrcmpsp {

using ActivityId = int;
using ProjectId = int;
using ModeId = int;
using Time = int;

/// Raised when instance data breaks a structural invariant (cycle, bad
/// dimensions, demand above a renewable capacity, ...).
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mode {
  int duration = 0;
  std::vector<int> local_renewable;     // one entry per local renewable of the project
  std::vector<int> local_nonrenewable;  // one entry per local non-renewable of the project
  std::vector<int> global_renewable;    // one entry per global renewable resource
};

struct Activity {
  ProjectId project = 0;
  int index_in_project = 0;
  std::vector<ActivityId> predecessors;
  std::vector<ActivityId> successors;  // derived by Instance
  std::vector<Mode> modes;

  /// Single zero-duration mode with no resource use (PSPLIB source/sink).
  bool is_dummy() const;
};

struct Project {
  Time release = 0;
  int cpd = 0;
  std::vector<int> local_renewable;
  std::vector<int> local_nonrenewable;
  std::vector<ActivityId> activities;  // filled by Instance, input order
};

/// Immutable problem data. Activities are indexed globally 0..n-1 and grouped
/// by project in input order.
class Instance {
 public:
  Instance() = default;

  /// Builds and validates an instance. `activities[i].project` must index
  /// `projects`; predecessor lists are global activity ids. Successor lists and
  /// project membership are derived here.
  Instance(std::vector<Project> projects, std::vector<Activity> activities,
           std::vector<int> global_capacity, Time horizon);

  int num_activities() const { return static_cast<int>(activities_.size()); }
  int num_projects() const { return static_cast<int>(projects_.size()); }
  int num_global() const { return static_cast<int>(global_capacity_.size()); }

  const std::vector<Activity>& activities() const { return activities_; }
  const std::vector<Project>& projects() const { return projects_; }
  const Activity& activity(ActivityId j) const { return activities_[j]; }
  const Project& project(ProjectId p) const { return projects_[p]; }
  const std::vector<int>& global_capacity() const { return global_capacity_; }
  Time horizon() const { return horizon_; }

  /// L = sum over projects of (cpd + release).
  std::int64_t lower_bound() const { return lower_bound_; }

  int duration(ActivityId j, ModeId m) const { return activities_[j].modes[m].duration; }

  /// Longest chain of minimum-mode durations through the project network.
  int critical_path(ProjectId p) const;

  /// Sum of per-activity maximum durations plus the latest release date; no
  /// serial schedule can finish later.
  Time trivial_horizon() const;

 private:
  void validate_and_link();

  std::vector<Project> projects_;
  std::vector<Activity> activities_;
  std::vector<int> global_capacity_;
  Time horizon_ = 0;
  std::int64_t lower_bound_ = 0;
};

/// Search-space point: permutation of all activities plus one mode per activity
/// (indexed by activity id, not by position).
struct SequenceSolution {
  std::vector<ActivityId> permutation;
  std::vector<ModeId> modes;

  bool operator==(const SequenceSolution&) const = default;
};

/// Decoded solution.
struct Schedule {
  std::vector<Time> start_times;
  std::vector<ModeId> modes;
  std::vector<Time> project_completions;
  std::int64_t tpc = 0;
  std::int64_t tpd = 0;
  Time tms = 0;

  bool operator==(const Schedule&) const = default;
};

std::vector<int> positions_of(const SequenceSolution& solution);

/// Total non-renewable usage of project p under `modes`, one entry per resource.
std::vector<int> nonrenewable_usage(const Instance& instance, ProjectId p,
                                    const std::vector<ModeId>& modes);
bool modes_feasible(const Instance& instance, ProjectId p, const std::vector<ModeId>& modes);
bool modes_feasible(const Instance& instance, const std::vector<ModeId>& modes);

/// Checks the SequenceSolution invariants: permutation of A, precedence order,
/// valid modes within non-renewable capacities. Returns a message per problem.
std::vector<std::string> check_sequence(const Instance& instance, const SequenceSolution& solution);

}  // namespace mrcmpsp
