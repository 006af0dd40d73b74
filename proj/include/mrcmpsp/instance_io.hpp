#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mrcmpsp/model.hpp"

namespace mrcmpsp {

/// Parse failure with the 1-based line it was detected on (0 when the problem
/// is not tied to a particular line, e.g. end of input).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// One PSPLIB multi-mode project as declared in a .mm file. Job indices are
/// 0-based positions in the file; dummy source/sink jobs are kept.
struct PsplibProject {
  struct JobMode {
    int duration = 0;
    std::vector<int> renewable;
    std::vector<int> nonrenewable;
  };
  struct Job {
    std::vector<int> successors;
    std::vector<JobMode> modes;
  };

  int horizon = 0;
  int release = 0;
  int mpm_time = 0;
  std::vector<int> renewable_capacity;
  std::vector<int> nonrenewable_capacity;
  std::vector<Job> jobs;
};

PsplibProject parse_psplib_mm(std::string_view text);

/// Single-project instance with every renewable column local. The critical
/// path duration is computed from minimum-duration modes.
Instance single_project_instance(const PsplibProject& project, Time horizon_override = 0);

/// Maps a path named inside a container to file contents; throws on failure.
using FileResolver = std::function<std::string(const std::string& path)>;

/// Resolver that reads files relative to `base_dir`.
FileResolver directory_resolver(std::string base_dir);

/// Repo-defined multi-project container (see docs/formats.md).
Instance parse_multiproject(std::string_view text, const FileResolver& resolver);

/// Import adapter for the competition layout: q, q lines of
/// "<release> <cpd> <project file>", |G|, |G| capacities. The last |G|
/// renewable columns of every project file are taken as the global resources.
Instance parse_competition(std::string_view text, const FileResolver& resolver);

enum class InstanceFormat { psplib, container, competition };

/// Chooses the format from the file extension / first token.
InstanceFormat detect_format(const std::string& path, std::string_view text);

/// Reads an instance of any supported format; throws std::runtime_error with
/// "no such instance" when the file cannot be opened.
Instance load_instance(const std::string& path, Time horizon_override = 0);

std::string read_file(const std::string& path);

// Solution files: "# tpd <x> tms <y>" then one line per activity,
// "<project> <index-in-project> <mode, 1-based> <start>", by global id.
std::string write_solution(const Instance& instance, const Schedule& schedule);
Schedule read_solution(const Instance& instance, std::string_view text);

struct InstanceStats {
  int q = 0;
  int n = 0;  // non-dummy activities
  double avg_duration = 0;
  double avg_modes = 0;
  double avg_predecessors = 0;
  double avg_local_renewable_count = 0;
  double avg_local_nonrenewable_count = 0;
  int global_renewable_count = 0;
  double avg_local_renewable_capacity = 0;
  double avg_nonrenewable_capacity = 0;
  double avg_global_capacity = 0;
  double avg_cpd = 0;
  int horizon = 0;
};

InstanceStats stats(const Instance& instance);

std::string stats_csv_header();
std::string stats_csv_row(const std::string& name, const InstanceStats& s);

}  // namespace mrcmpsp
