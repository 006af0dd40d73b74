#include "mrcmpsp/memetic.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>

#include "mrcmpsp/neighbourhoods.hpp"
#include "mrcmpsp/objectives.hpp"

namespace mrcmpsp {

bool accept_individual(const std::vector<Individual>& population, std::size_t member, int generation,
                       double ratio, int worst_count, int min_age) {
  const Individual& me = population[member];
  double best = population.front().f;
  for (const auto& ind : population) best = std::min(best, ind.f);
  if (me.f > ratio * best) return false;

  if (static_cast<int>(population.size()) > worst_count && generation - me.birth >= min_age) {
    // Members ranked worse: larger f_d + idle, ties broken towards larger index.
    const std::int64_t key = me.fd + me.idle;
    int worse = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
      const std::int64_t k = population[i].fd + population[i].idle;
      if (k > key || (k == key && i > member)) ++worse;
    }
    if (worse < worst_count) return false;
  }
  return true;
}

std::size_t select_parent(const std::vector<Individual>& population, Rng& rng) {
  const int size = static_cast<int>(population.size());
  std::size_t a = static_cast<std::size_t>(uniform_int(rng, 0, size - 1));
  std::size_t b = static_cast<std::size_t>(uniform_int(rng, 0, size - 1));
  return population[b].f < population[a].f ? b : a;
}

namespace {

void score(Individual& ind, Evaluator& evaluator) {
  ind.f = evaluator.evaluate(ind.solution);
  ind.fd = evaluator.schedule().tpd;
  ind.fm = evaluator.schedule().tms;
}

bool lex_better(std::int64_t fd, Time fm, const Schedule& than) { return fd < than.tpd || (fd == than.tpd && fm < than.tms); }

}  // namespace

Individual mutate(const Individual& parent, Evaluator& evaluator, Rng& rng, int generation, int option,
                  int* chosen) {
  const Instance& instance = evaluator.instance();
  if (option < 0) option = uniform_int(rng, 0, kMutationOptions - 1);
  if (chosen) *chosen = option;
  Individual child;
  child.solution = parent.solution;
  switch (option) {
    case 0:
      for (int r = 0; r < 20; ++r) {
        evaluator.evaluate(child.solution);
        const Schedule& d = evaluator.schedule();
        SelectionParams sp;
        sp.strategy = SelectionStrategy::local;
        sp.cardinality = 3;
        sp.width = std::max(1.0, 0.1 * d.tms);
        sp.schedule = &d;
        reshuffle(instance, child.solution, rng, ReshuffleKind::both, sp);
      }
      break;
    case 1:
      swap_neighbour_projects(instance, child.solution, rng);
      break;
    case 2:
      flush_projects(instance, child.solution, rng, 1, FlushDirection::ending);
      break;
    case 3:
      flush_projects(instance, child.solution, rng, 2, FlushDirection::beginning);
      break;
    case 4:
      flush_projects(instance, child.solution, rng, 3, FlushDirection::beginning);
      break;
    default:
      throw std::invalid_argument("unknown mutation option");
  }
  score(child, evaluator);
  child.idle = 0;
  child.birth = generation;
  return child;
}

RunResult run(const Instance& instance, const EngineConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto wall = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.total_time));

  const int workers = config.workers > 0 ? config.workers : std::max(1, omp_get_num_procs());
  RunResult result;

  std::vector<Evaluator> evaluators;
  evaluators.reserve(workers);
  for (int w = 0; w < workers; ++w) evaluators.emplace_back(instance, DecodeOptions{}, config.horizon_override);

  // Construction.
  std::uint64_t construction_schedules = 0;
  if (config.use_mcts) {
    ConstructionResult c = construct(instance, config.seed, config.constructor);
    result.partition = c.partition;
    construction_schedules = c.schedules;
  } else {
    result.partition.start.resize(instance.num_projects());
    std::iota(result.partition.start.begin(), result.partition.start.end(), 0);
  }
  std::vector<Individual> population(workers);
  for (int i = 0; i < workers; ++i) {
    Rng rng(derive_seed(config.seed, 0xA11CE, static_cast<std::uint64_t>(i)));
    population[i].solution = rollout(instance, result.partition, rng, config.constructor.repair);
    score(population[i], evaluators[0]);
  }
  result.construction_wall = wall();

  auto track_best = [&](const Individual& ind) {
    if (result.best_solution.permutation.empty() || lex_better(ind.fd, ind.fm, result.best)) {
      result.best_solution = ind.solution;
      result.best = evaluators[0].workspace().decode(ind.solution);
    }
  };
  for (const auto& ind : population) track_best(ind);

  auto report = [&](int generation) {
    ProgressRow row{wall(), generation, result.best.tpd, result.best.tms};
    result.progress.push_back(row);
    if (config.on_progress) config.on_progress(row);
  };
  report(0);

  const std::vector<Heuristic> catalogue = heuristic_catalogue(true);
  auto schedules = [&] {
    std::uint64_t total = construction_schedules;
    for (const auto& e : evaluators) total += e.schedules();
    return total;
  };
  double gamma = 0.0;
  int generation = 0;
  while (result.best.tpd > 0 && Clock::now() < deadline &&
         (!config.max_generations || generation < *config.max_generations) &&
         (!config.max_schedules || schedules() < *config.max_schedules)) {
    double fraction = wall() / config.total_time;
    if (config.max_generations)
      fraction = std::max(fraction, static_cast<double>(generation) / *config.max_generations);
    if (!result.gamma_switch_generation && fraction >= config.gamma_at) {
      gamma = config.gamma;
      result.gamma_switch_generation = generation;
      result.gamma_switch_wall = wall();
      for (auto& e : evaluators) e.set_gamma(gamma);
      for (auto& ind : population) ind.f = combined_objective(ind.fd, ind.fm, gamma);
    }

    ++generation;
    LocalSearchConfig ls = config.local_search;
    ls.deadline = deadline;
    std::exception_ptr failure;
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (int i = 0; i < workers; ++i) {
      try {
        Evaluator& evaluator = evaluators[omp_get_thread_num()];
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(generation), static_cast<std::uint64_t>(i)));
        Individual& ind = population[i];
        LocalSearchResult r = local_search(ind.solution, evaluator, rng, ls, catalogue);
        const std::int64_t before = ind.fd;
        ind.solution = std::move(r.best);
        ind.f = r.best_f;
        ind.fd = r.best_schedule.tpd;
        ind.fm = r.best_schedule.tms;
        ind.idle = ind.fd < before ? 0 : ind.idle + 1;
      } catch (...) {
#pragma omp critical(mrcmpsp_generation_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    for (const auto& ind : population) track_best(ind);

    // Verdicts and parents come from the post-search snapshot.
    const std::vector<Individual> snapshot = population;
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(generation), 0xACCE97));
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      if (accept_individual(snapshot, i, generation, config.accept_ratio, config.worst_count, config.min_age))
        continue;
      const Individual& parent = snapshot[select_parent(snapshot, rng)];
      population[i] = mutate(parent, evaluators[0], rng, generation);
      track_best(population[i]);
    }
    report(generation);
  }

  result.generations = generation;
  result.schedules = schedules();
  result.wall = wall();
  return result;
}

RunResult run_single_project(const Instance& instance, const SingleProjectConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto wall = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  RunResult result;
  result.partition.start.resize(instance.num_projects());
  std::iota(result.partition.start.begin(), result.partition.start.end(), 0);
  Evaluator evaluator(instance, DecodeOptions{}, config.horizon_override);
  const std::vector<Heuristic> catalogue = heuristic_catalogue(false);
  LocalSearchConfig ls;
  ls.clock = ClockMode::schedules;
  ls.budget = static_cast<double>(config.restart_every);
  ls.reset_after = 0.2 * ls.budget;
  ls.second_stage_after = 0.6 * ls.budget;

  int block = 0;
  while (evaluator.schedules() < config.max_schedules && wall() < config.total_time) {
    Rng rng(derive_seed(config.seed, 0x5EED, static_cast<std::uint64_t>(block)));
    SequenceSolution start = random_solution(instance, rng);
    LocalSearchResult r = local_search(start, evaluator, rng, ls, catalogue);
    if (result.best_solution.permutation.empty() ||
        lex_better(r.best_schedule.tpd, r.best_schedule.tms, result.best)) {
      result.best_solution = r.best;
      result.best = r.best_schedule;
    }
    ++block;
    ProgressRow row{wall(), block, result.best.tpd, result.best.tms};
    result.progress.push_back(row);
    if (config.on_progress) config.on_progress(row);
    if (result.best.tpd == 0) break;
  }
  result.generations = block;
  result.schedules = evaluator.schedules();
  result.wall = wall();
  return result;
}

}  // namespace mrcmpsp
