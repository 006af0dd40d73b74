#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mrcmpsp/model.hpp"
#include "mrcmpsp/sgs.hpp"

namespace mrcmpsp {

struct BenchVariant {
  std::string name;
  DecodeOptions options;
};

/// naive, optimized, optimized+prefix, optimized+prefix+incremental.
std::vector<BenchVariant> bench_variants();

/// Solutions visited by a local-search-like walk: small and R&R moves from a
/// random start, each kept or reverted with probability 1/2.
std::vector<SequenceSolution> move_trace(const Instance& instance, std::uint64_t seed, std::size_t length);

/// FNV-1a over start times and modes.
std::uint64_t schedule_hash(const Schedule& schedule, std::uint64_t h = 1469598103934665603ull);

struct BenchRow {
  std::string instance;
  std::string variant;
  std::uint64_t schedules = 0;
  double seconds = 0.0;
  double rate = 0.0;  // schedules per second
  std::uint64_t hash = 0;  // over one pass of the trace
  bool hash_matches = true;  // equal to the first variant's hash
};

/// Decodes the trace with every variant, repeating passes until at least
/// `min_seconds` have elapsed.
std::vector<BenchRow> bench_instance(const std::string& name, const Instance& instance,
                                     const std::vector<SequenceSolution>& trace,
                                     const std::vector<BenchVariant>& variants, double min_seconds,
                                     Time horizon_override = 0);

void write_bench_csv_header(std::ostream& out);
void write_bench_csv_row(std::ostream& out, const BenchRow& row);

}  // namespace mrcmpsp
