#pragma once

#include <string>
#include <vector>

#include "mrcmpsp/instance_io.hpp"
#include "mrcmpsp/rng.hpp"

namespace mrcmpsp {

/// Shape of one PSPLIB-style multi-mode project: `jobs` real jobs plus a
/// dummy source and sink, 2 renewable and 2 non-renewable columns.
struct ProjectShape {
  int jobs = 10;
  int modes = 3;
  double avg_predecessors = 1.2;
  int max_duration = 10;
  int max_demand = 10;
};

PsplibProject generate_project(Rng& rng, const ProjectShape& shape);

/// Standard PSPLIB .mm text layout.
std::string write_psplib_mm(const PsplibProject& project, const std::string& basename = "synthetic");

/// Recipe for a multi-project stand-in shaped after one Table 1 row.
struct SyntheticRecipe {
  std::string name;
  std::vector<int> project_jobs;  // real jobs per project
  std::vector<int> global_capacity;
  double avg_predecessors = 1.2;
  int release_spread = 0;         // releases uniform in [0, release_spread]
};

/// Stand-ins for the A/B/X rows of the instance table.
std::vector<SyntheticRecipe> table_recipes();

struct GeneratedFiles {
  std::string container;
  std::vector<std::pair<std::string, std::string>> projects;  // (file name, contents)
};

/// Builds one container plus its project files. Renewable column 2 of every
/// project maps to global 0; with two globals, column 1 maps to global 1.
GeneratedFiles generate_container(const SyntheticRecipe& recipe, std::uint64_t seed);

}  // namespace mrcmpsp
