#include "mrcmpsp/bench.hpp"

#include <chrono>
#include <iomanip>

#include "mrcmpsp/constructor.hpp"
#include "mrcmpsp/neighbourhoods.hpp"
#include "mrcmpsp/rng.hpp"

namespace mrcmpsp {

std::vector<BenchVariant> bench_variants() {
  return {
      {"naive", DecodeOptions::plain_naive()},
      {"optimized", {SlotSearch::optimized, false, false}},
      {"optimized+prefix", {SlotSearch::optimized, true, false}},
      {"optimized+prefix+incremental", {SlotSearch::optimized, true, true}},
  };
}

std::vector<SequenceSolution> move_trace(const Instance& instance, std::uint64_t seed, std::size_t length) {
  Rng rng(derive_seed(seed, 0xBE4C));
  SequenceSolution current = random_solution(instance, rng);
  std::vector<SequenceSolution> trace;
  trace.reserve(length);
  SelectionParams sp;
  sp.strategy = SelectionStrategy::uniform;
  sp.cardinality = 3;
  while (trace.size() < length) {
    SequenceSolution next = current;
    switch (uniform_int(rng, 0, 3)) {
      case 0: swap_activities(instance, next, rng); break;
      case 1: shift_activity(instance, next, rng); break;
      case 2: change_mode(instance, next, rng); break;
      default: reshuffle(instance, next, rng, ReshuffleKind::both, sp); break;
    }
    trace.push_back(next);
    if (bernoulli(rng, 0.5)) current = std::move(next);
  }
  return trace;
}

std::uint64_t schedule_hash(const Schedule& schedule, std::uint64_t h) {
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 1099511628211ull;
    }
  };
  for (Time t : schedule.start_times) mix(static_cast<std::uint64_t>(t));
  for (ModeId m : schedule.modes) mix(static_cast<std::uint64_t>(m));
  return h;
}

std::vector<BenchRow> bench_instance(const std::string& name, const Instance& instance,
                                     const std::vector<SequenceSolution>& trace,
                                     const std::vector<BenchVariant>& variants, double min_seconds,
                                     Time horizon_override) {
  using Clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (const auto& variant : variants) {
    GeneratorWorkspace ws(instance, horizon_override);
    BenchRow row;
    row.instance = name;
    row.variant = variant.name;
    row.hash = 1469598103934665603ull;
    for (const auto& s : trace) row.hash = schedule_hash(ws.decode(s, variant.options), row.hash);

    const auto t0 = Clock::now();
    double elapsed = 0.0;
    std::uint64_t sink = 0;
    do {
      for (const auto& s : trace) sink += static_cast<std::uint64_t>(ws.decode(s, variant.options).tms);
      row.schedules += trace.size();
      elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    } while (elapsed < min_seconds && !trace.empty());
    asm volatile("" : : "r"(sink));
    row.seconds = elapsed;
    row.rate = elapsed > 0 ? static_cast<double>(row.schedules) / elapsed : 0.0;
    row.hash_matches = rows.empty() || rows.front().hash == row.hash;
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv_header(std::ostream& out) {
  out << "instance,variant,schedules,seconds,schedules_per_second,hash,hash_matches\n";
}

void write_bench_csv_row(std::ostream& out, const BenchRow& row) {
  out << row.instance << ',' << row.variant << ',' << row.schedules << ',' << std::fixed << std::setprecision(4)
      << row.seconds << ',' << std::setprecision(1) << row.rate << ',' << std::hex << std::setw(16)
      << std::setfill('0') << row.hash << std::dec << std::setfill(' ') << ',' << (row.hash_matches ? 1 : 0)
      << '\n';
  out.unsetf(std::ios::fixed);
}

}  // namespace mrcmpsp
