#pragma once

#include <string>
#include <vector>

#include "mrcmpsp/model.hpp"

namespace mrcmpsp {

enum class ViolationKind {
  release_time,
  nonrenewable,
  local_renewable,
  global_renewable,
  precedence,
  mode,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int activity = -1;  // offending activity (release, precedence, mode)
  int other = -1;     // predecessor for precedence conflicts
  int project = -1;
  int resource = -1;
  Time time = -1;     // slot for renewable conflicts

  std::string describe() const;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every feasibility condition of a direct schedule (T, M). Throws
/// std::invalid_argument when the arrays do not match the instance size.
FeasibilityReport is_feasible(const Instance& instance, const Schedule& schedule);

struct Objectives {
  std::int64_t tpd = 0;
  Time tms = 0;
  double f = 0.0;
};

/// f = tpd + gamma * tms.
inline double combined_objective(std::int64_t tpd, Time tms, double gamma) {
  return static_cast<double>(tpd) + gamma * static_cast<double>(tms);
}

/// Recomputes completions, tpd (= tpc - L), tms and f from start times and
/// modes; the schedule's cached objective fields are ignored.
Objectives objectives(const Instance& instance, const Schedule& schedule, double gamma);

/// Fills project_completions, tpc, tpd and tms of `schedule` from its start
/// times and modes.
void fill_objectives(const Instance& instance, Schedule& schedule);

}  // namespace mrcmpsp
