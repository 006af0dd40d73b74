#pragma once

#include <string>
#include <vector>

#include "mrcmpsp/model.hpp"
#include "mrcmpsp/rng.hpp"

namespace mrcmpsp::testing {

/// Builds small instances by hand. Mode vectors shorter than the instance's
/// resource counts are padded with zeros.
class Builder {
 public:
  explicit Builder(std::vector<int> global_capacity = {}) : globals_(std::move(global_capacity)) {}

  ProjectId project(Time release = 0, std::vector<int> local_renewable = {},
                    std::vector<int> local_nonrenewable = {});
  ActivityId activity(ProjectId p, std::vector<Mode> modes, std::vector<ActivityId> predecessors = {});
  /// Critical path durations are filled in from the minimum-duration modes.
  Instance build(Time horizon = 0) const;

 private:
  std::vector<int> globals_;
  std::vector<Project> projects_;
  std::vector<Activity> activities_;
};

Mode mode(int duration, std::vector<int> local_renewable = {}, std::vector<int> global_renewable = {},
          std::vector<int> local_nonrenewable = {});

/// Shipped stand-in by table name, e.g. "A-1", or a J30 file index 1..20.
const Instance& data_instance(const std::string& name);
const Instance& j30_instance(int index);
std::string data_path(const std::string& relative);

/// Names of the A rows, B rows, X rows.
std::vector<std::string> table_names(char group);

/// Some activity could start at a strictly earlier slot with every other
/// activity fixed (precedence, release and renewable capacity respected).
/// Returns the activity id or -1.
int earlier_start_available(const Instance& instance, const Schedule& schedule);

/// Randomly generated multi-project instance small enough for brute force.
Instance random_small_instance(Rng& rng, int projects, int jobs_per_project, int globals);

}  // namespace mrcmpsp::testing
