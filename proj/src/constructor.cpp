#include "mrcmpsp/constructor.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "mrcmpsp/sgs.hpp"

namespace mrcmpsp {

PartSizes part_sizes(int q) {
  PartSizes s{q / 3, q / 3, q / 3};
  if (q % 3 >= 1) ++s.start;
  if (q % 3 == 2) ++s.middle;
  return s;
}

int shortfall(const Instance& instance, ProjectId p, const std::vector<ModeId>& modes) {
  auto use = nonrenewable_usage(instance, p, modes);
  const auto& cap = instance.project(p).local_nonrenewable;
  int total = 0;
  for (std::size_t k = 0; k < cap.size(); ++k) total += std::max(0, use[k] - cap[k]);
  return total;
}

int repair_modes(const Instance& instance, ProjectId p, std::vector<ModeId>& modes, Rng& rng,
                 const RepairBudget& budget) {
  const auto& members = instance.project(p).activities;
  const auto& cap = instance.project(p).local_nonrenewable;
  std::vector<ActivityId> flexible;
  for (ActivityId j : members)
    if (instance.activity(j).modes.size() > 1) flexible.push_back(j);

  std::vector<int> use = nonrenewable_usage(instance, p, modes);
  auto excess = [&] {
    int total = 0;
    for (std::size_t k = 0; k < cap.size(); ++k) total += std::max(0, use[k] - cap[k]);
    return total;
  };
  int current = excess();
  if (current == 0) return 0;
  if (flexible.empty()) throw ConstructionError("project " + std::to_string(p) + " has no feasible mode assignment");

  auto shift_use = [&](ActivityId j, ModeId m, int sign) {
    const auto& demand = instance.activity(j).modes[m].local_nonrenewable;
    for (std::size_t k = 0; k < cap.size(); ++k) use[k] += sign * demand[k];
  };

  const int flips = budget.flips_per_activity * static_cast<int>(members.size());
  int tried = 0;
  for (int round = 0; round < budget.restarts; ++round) {
    if (round > 0) {
      for (ActivityId j : flexible) {
        shift_use(j, modes[j], -1);
        modes[j] = uniform_int(rng, 0, static_cast<int>(instance.activity(j).modes.size()) - 1);
        shift_use(j, modes[j], +1);
      }
      current = excess();
      if (current == 0) return tried;
    }
    for (int f = 0; f < flips; ++f) {
      ++tried;
      ActivityId j = flexible[uniform_int(rng, 0, static_cast<int>(flexible.size()) - 1)];
      const int count = static_cast<int>(instance.activity(j).modes.size());
      ModeId old = modes[j];
      ModeId m = uniform_int(rng, 0, count - 2);
      if (m >= old) ++m;
      shift_use(j, old, -1);
      shift_use(j, m, +1);
      int next = excess();
      if (next <= current) {
        modes[j] = m;
        current = next;
        if (current == 0) return tried;
      } else {
        shift_use(j, m, -1);
        shift_use(j, old, +1);
      }
    }
  }
  throw ConstructionError("mode repair failed for project " + std::to_string(p) + " after " +
                          std::to_string(budget.restarts) + " restarts");
}

SequenceSolution rollout(const Instance& instance, const ProjectPartition& partition, Rng& rng,
                         const RepairBudget& budget) {
  const int n = instance.num_activities();
  SequenceSolution s;
  s.permutation.reserve(n);
  s.modes.assign(n, 0);

  std::vector<int> waiting(n, 0);
  for (ActivityId j = 0; j < n; ++j) waiting[j] = static_cast<int>(instance.activity(j).predecessors.size());
  std::vector<ActivityId> ready;
  for (const auto* part : {&partition.start, &partition.middle, &partition.end}) {
    ready.clear();
    for (ProjectId p : *part)
      for (ActivityId j : instance.project(p).activities)
        if (waiting[j] == 0) ready.push_back(j);
    while (!ready.empty()) {
      std::size_t pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ready.size()) - 1));
      ActivityId j = ready[pick];
      ready[pick] = ready.back();
      ready.pop_back();
      s.permutation.push_back(j);
      for (ActivityId succ : instance.activity(j).successors)
        if (--waiting[succ] == 0) ready.push_back(succ);
    }
  }
  if (static_cast<int>(s.permutation.size()) != n)
    throw std::invalid_argument("partition does not cover every project");

  for (ActivityId j = 0; j < n; ++j)
    s.modes[j] = uniform_int(rng, 0, static_cast<int>(instance.activity(j).modes.size()) - 1);
  for (ProjectId p = 0; p < instance.num_projects(); ++p) repair_modes(instance, p, s.modes, rng, budget);
  return s;
}

SequenceSolution random_solution(const Instance& instance, Rng& rng, const RepairBudget& budget) {
  ProjectPartition all;
  all.start.resize(instance.num_projects());
  std::iota(all.start.begin(), all.start.end(), 0);
  return rollout(instance, all, rng, budget);
}

double nearest_rank_percentile(std::vector<double> values, double fraction) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

namespace {

struct Sampler {
  const Instance& instance;
  const ConstructorConfig& config;
  std::uint64_t seed;
  std::vector<Evaluator> evaluators;
  ConstructionResult& result;

  /// Scores a candidate partition; keeps the best rollout seen overall.
  double score(const ProjectPartition& partition, std::uint64_t stream) {
    const int count = config.rollouts;
    std::vector<double> f(count);
    std::vector<SequenceSolution> solutions(count);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < count; ++r) {
      try {
        Rng rng(derive_seed(seed, stream, static_cast<std::uint64_t>(r)));
        solutions[r] = rollout(instance, partition, rng, config.repair);
        f[r] = evaluators[omp_get_thread_num()].evaluate(solutions[r]);
      } catch (...) {
#pragma omp critical(mrcmpsp_rollout_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    result.schedules += static_cast<std::uint64_t>(count);
    auto best = std::min_element(f.begin(), f.end());
    if (result.best.permutation.empty() || *best < result.best_f) {
      result.best_f = *best;
      result.best = solutions[best - f.begin()];
    }
    return nearest_rank_percentile(std::move(f), config.percentile);
  }
};

}  // namespace

ConstructionResult construct(const Instance& instance, std::uint64_t seed, const ConstructorConfig& config) {
  ConstructionResult result;
  const int q = instance.num_projects();
  const PartSizes sizes = part_sizes(q);
  std::vector<ProjectId> projects(q);
  std::iota(projects.begin(), projects.end(), 0);
  Rng rng(derive_seed(seed, 0xC0));

  if (q == 1) {
    result.partition.start = projects;
    Rng single(derive_seed(seed, 0xC1));
    result.best = rollout(instance, result.partition, single, config.repair);
    Evaluator eval(instance);
    result.best_f = eval.evaluate(result.best);
    result.schedules = 1;
    return result;
  }

  Sampler sampler{instance, config, seed, {}, result};
  const int threads = std::max(1, omp_get_max_threads());
  sampler.evaluators.reserve(threads);
  for (int t = 0; t < threads; ++t) sampler.evaluators.emplace_back(instance);

  auto split = [&](const std::vector<ProjectId>& shuffled) {
    ProjectPartition p;
    p.start.assign(shuffled.begin(), shuffled.begin() + sizes.start);
    p.middle.assign(shuffled.begin() + sizes.start, shuffled.begin() + sizes.start + sizes.middle);
    p.end.assign(shuffled.begin() + sizes.start + sizes.middle, shuffled.end());
    return p;
  };

  std::uint64_t stream = 1;
  // Stage 1: the end part.
  std::vector<ProjectId> fixed_end;
  if (sizes.end > 0) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < config.candidates; ++c) {
      std::vector<ProjectId> order = projects;
      std::shuffle(order.begin(), order.end(), rng);
      ProjectPartition candidate = split(order);
      double s = sampler.score(candidate, stream++);
      if (s < best) {
        best = s;
        fixed_end = candidate.end;
      }
    }
  }

  // Stage 2: start versus middle among the rest.
  std::vector<ProjectId> rest;
  for (ProjectId p : projects)
    if (std::find(fixed_end.begin(), fixed_end.end(), p) == fixed_end.end()) rest.push_back(p);
  double best = std::numeric_limits<double>::infinity();
  for (int c = 0; c < config.candidates; ++c) {
    std::vector<ProjectId> order = rest;
    std::shuffle(order.begin(), order.end(), rng);
    ProjectPartition candidate;
    candidate.start.assign(order.begin(), order.begin() + sizes.start);
    candidate.middle.assign(order.begin() + sizes.start, order.end());
    candidate.end = fixed_end;
    double s = sampler.score(candidate, stream++);
    if (s < best) {
      best = s;
      result.partition = candidate;
    }
  }
  for (auto* part : {&result.partition.start, &result.partition.middle, &result.partition.end})
    std::sort(part->begin(), part->end());
  return result;
}

}  // namespace mrcmpsp
