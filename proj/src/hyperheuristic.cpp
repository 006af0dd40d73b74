#include "mrcmpsp/hyperheuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mrcmpsp {

LlhParams default_llh_params(const Instance& instance) {
  const int n = instance.num_activities();
  const int q = std::max(1, instance.num_projects());
  LlhParams p;
  p.fils_window = std::max(2, (n + q - 1) / q);
  p.rr_min = 2;
  p.rr_max = std::max(3, (n + 19) / 20);
  return p;
}

namespace {

int cardinality(const MoveInput& in) { return uniform_int(in.rng, in.params.rr_min, in.params.rr_max); }

double local_width(const MoveInput& in) {
  return std::max(1.0, in.params.local_width_fraction * static_cast<double>(in.schedule.tms));
}

Heuristic rr(ReshuffleKind kind, SelectionStrategy strategy) {
  std::string name = std::string("reshuffle_") + to_string(kind) + "/" + to_string(strategy);
  return {name, LlhClass::medium, [kind, strategy](SequenceSolution& s, const MoveInput& in) {
            SelectionParams sp;
            sp.strategy = strategy;
            sp.cardinality = cardinality(in);
            sp.width = local_width(in);
            sp.schedule = &in.schedule;
            return reshuffle(in.instance, s, in.rng, kind, sp);
          }};
}

}  // namespace

std::vector<Heuristic> heuristic_catalogue(bool project_moves) {
  std::vector<Heuristic> c;
  c.push_back({"swap", LlhClass::small,
               [](SequenceSolution& s, const MoveInput& in) { return swap_activities(in.instance, s, in.rng); }});
  c.push_back({"shift", LlhClass::small,
               [](SequenceSolution& s, const MoveInput& in) { return shift_activity(in.instance, s, in.rng); }});
  c.push_back({"change_mode", LlhClass::small,
               [](SequenceSolution& s, const MoveInput& in) { return change_mode(in.instance, s, in.rng); }});

  c.push_back(rr(ReshuffleKind::modes, SelectionStrategy::uniform));
  c.push_back(rr(ReshuffleKind::both, SelectionStrategy::uniform));
  c.push_back(rr(ReshuffleKind::modes, SelectionStrategy::local));
  c.push_back(rr(ReshuffleKind::both, SelectionStrategy::local));
  c.push_back(rr(ReshuffleKind::both, SelectionStrategy::global));
  c.push_back(rr(ReshuffleKind::both, SelectionStrategy::ending));
  if (project_moves) c.push_back(rr(ReshuffleKind::both, SelectionStrategy::project));
  c.push_back({"fils_swap", LlhClass::medium, [](SequenceSolution& s, const MoveInput& in) {
                 return fils_swap(in.instance, s, in.rng, in.params.fils_window, in.evaluate, in.current_f);
               }});
  c.push_back({"fils_shift", LlhClass::medium, [](SequenceSolution& s, const MoveInput& in) {
                 return fils_shift(in.instance, s, in.rng, in.params.fils_window, in.evaluate, in.current_f);
               }});
  c.push_back({"fils_change_mode", LlhClass::medium, [](SequenceSolution& s, const MoveInput& in) {
                 return fils_change_mode(in.instance, s, in.rng, in.evaluate, in.current_f);
               }});

  if (project_moves) {
    c.push_back({"flush_1", LlhClass::large, [](SequenceSolution& s, const MoveInput& in) {
                   auto dir = bernoulli(in.rng, 0.5) ? FlushDirection::beginning : FlushDirection::ending;
                   return flush_projects(in.instance, s, in.rng, 1, dir);
                 }});
    c.push_back({"swap_two_projects", LlhClass::large,
                 [](SequenceSolution& s, const MoveInput& in) { return swap_two_projects(in.instance, s, in.rng); }});
    c.push_back({"compress_project", LlhClass::large,
                 [](SequenceSolution& s, const MoveInput& in) { return compress_project(in.instance, s, in.rng); }});
    c.push_back({"shift_project", LlhClass::large,
                 [](SequenceSolution& s, const MoveInput& in) { return shift_project(in.instance, s, in.rng); }});
  }
  return c;
}

LlhPool::LlhPool(int count) : ids_(count), scores_(count, 1), total_(count) {
  std::iota(ids_.begin(), ids_.end(), 0);
}

LlhPool::LlhPool(std::vector<int> ids, std::vector<int> scores) : ids_(std::move(ids)), scores_(std::move(scores)) {
  if (ids_.size() != scores_.size()) throw std::invalid_argument("pool ids and scores differ in length");
  for (int s : scores_) {
    if (s <= 0) throw std::invalid_argument("pool scores must be positive");
    total_ += s;
  }
}

double LlhPool::probability(int id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (ids_[i] == id) return static_cast<double>(scores_[i]) / total_;
  return 0.0;
}

int select_llh(const LlhPool& pool, Rng& rng) {
  if (pool.empty()) throw std::logic_error("select_llh on an empty pool");
  int r = uniform_int(rng, 0, pool.total_score() - 1);
  for (std::size_t i = 0; i < pool.ids().size(); ++i) {
    r -= pool.scores()[i];
    if (r < 0) return pool.ids()[i];
  }
  return pool.ids().back();
}

int epsilon_log_term(double f_best, double base) {
  // Smallest c with base^c >= f, by repeated multiplication so that exact
  // powers (f = 1000) do not round up.
  int c = 0;
  double power = 1.0;
  while (power < f_best) {
    power *= base;
    ++c;
  }
  return std::max(1, c);
}

std::optional<double> update_epsilon(double f_best, Rng& rng, double base) {
  if (!(f_best > 0)) return std::nullopt;
  const int c = epsilon_log_term(f_best, base);
  const int r = uniform_int(rng, 1, c);
  return (c + r) / f_best;
}

bool DominanceTracker::record_step(double best_f, const std::vector<int>& achievers) {
  if (achievers.empty()) return false;
  if (record_ && !(best_f < *record_)) return false;
  record_ = best_f;
  for (int h : achievers) ++scores_[h];
  return true;
}

LlhPool DominanceTracker::pool() const {
  std::vector<int> ids, scores;
  for (std::size_t h = 0; h < scores_.size(); ++h)
    if (scores_[h] > 0) {
      ids.push_back(static_cast<int>(h));
      scores.push_back(scores_[h]);
    }
  if (ids.empty()) return LlhPool(static_cast<int>(scores_.size()));
  return LlhPool(std::move(ids), std::move(scores));
}

SecondStageResult second_stage(const SequenceSolution& start, double f_start, const Schedule& schedule,
                               double best_f, double epsilon, const std::vector<Heuristic>& catalogue,
                               const LlhParams& params, Evaluator& evaluator, Rng& rng, int steps,
                               const std::function<bool()>& expired) {
  const Instance& instance = evaluator.instance();
  const int n = instance.num_activities();
  const int q = std::max(1, instance.num_projects());
  auto iterations = [&](LlhClass cls) {
    switch (cls) {
      case LlhClass::small: return std::max(1, (5 * n + q - 1) / q);
      case LlhClass::medium: return std::max(1, (n + q - 1) / q);
      case LlhClass::large: return 1;
    }
    return 1;
  };
  EvaluateFn evaluate = [&](const SequenceSolution& s) { return evaluator.evaluate(s); };

  SecondStageResult out;
  out.solution = start;
  out.f = f_start;
  out.schedule = schedule;
  out.best_f = best_f;
  DominanceTracker tracker(static_cast<int>(catalogue.size()));
  bool stop = false;
  for (int step = 0; step < steps && !stop; ++step) {
    double step_best = std::numeric_limits<double>::infinity();
    std::vector<int> achievers;
    SequenceSolution step_solution;
    Schedule step_schedule;
    for (std::size_t h = 0; h < catalogue.size() && !stop; ++h) {
      const int count = iterations(catalogue[h].cls);
      for (int it = 0; it < count; ++it) {
        if (expired()) {
          stop = true;
          break;
        }
        SequenceSolution candidate = out.solution;
        MoveInput in{instance, rng, evaluate, out.f, out.schedule, params};
        MoveOutcome moved = catalogue[h].apply(candidate, in);
        if (!moved.changed) continue;
        double f = moved.objective ? *moved.objective : evaluator.evaluate(candidate);
        if (f < step_best) {
          step_best = f;
          achievers.assign(1, static_cast<int>(h));
          step_solution = std::move(candidate);
          step_schedule = evaluator.schedule();
        } else if (f == step_best &&
                   std::find(achievers.begin(), achievers.end(), static_cast<int>(h)) == achievers.end()) {
          achievers.push_back(static_cast<int>(h));
        }
      }
    }
    if (achievers.empty()) continue;
    StepRecord record{step_best, achievers, tracker.record_step(step_best, achievers), false};
    if (accept(step_best, out.f, out.best_f, epsilon)) {
      record.propagated = true;
      out.solution = std::move(step_solution);
      out.f = step_best;
      out.schedule = std::move(step_schedule);
      if (out.f < out.best_f) {
        out.improved = true;
        out.best_f = out.f;
        out.best = out.solution;
        out.best_schedule = out.schedule;
      }
    }
    out.steps.push_back(std::move(record));
  }
  out.pool = tracker.pool();
  return out;
}

LocalSearchResult local_search(const SequenceSolution& start, Evaluator& evaluator, Rng& rng,
                               const LocalSearchConfig& config, const std::vector<Heuristic>& catalogue,
                               std::vector<TraceEvent>* trace) {
  using Clock = std::chrono::steady_clock;
  const Instance& instance = evaluator.instance();
  const LlhParams params = config.params ? *config.params : default_llh_params(instance);
  const auto wall_start = Clock::now();
  const std::uint64_t schedules_start = evaluator.schedules();
  auto elapsed = [&]() -> double {
    if (config.clock == ClockMode::schedules) return static_cast<double>(evaluator.schedules() - schedules_start);
    return std::chrono::duration<double>(Clock::now() - wall_start).count();
  };
  auto expired = [&] {
    if (config.deadline && Clock::now() >= *config.deadline) return true;
    return elapsed() >= config.budget;
  };
  EvaluateFn evaluate = [&](const SequenceSolution& s) { return evaluator.evaluate(s); };

  LocalSearchResult result;
  SequenceSolution current = start;
  double f = evaluator.evaluate(current);
  Schedule schedule = evaluator.schedule();
  result.best = current;
  result.best_f = f;
  result.best_schedule = schedule;
  result.pool = LlhPool(static_cast<int>(catalogue.size()));

  auto epsilon = update_epsilon(result.best_f, rng, config.log_base);
  if (!epsilon || config.budget <= 0 || catalogue.empty()) return result;

  double mark_reset = elapsed(), mark_stage = mark_reset;
  auto emit = [&](int h, double value, TraceEvent::Kind kind) {
    if (trace) trace->push_back({result.iterations, h, value, *epsilon, kind});
  };

  while (!expired()) {
    const int h = select_llh(result.pool, rng);
    SequenceSolution candidate = current;
    MoveInput in{instance, rng, evaluate, f, schedule, params};
    MoveOutcome moved = catalogue[h].apply(candidate, in);
    ++result.iterations;
    if (moved.changed) {
      double fc = moved.objective ? *moved.objective : evaluator.evaluate(candidate);
      if (accept(fc, f, result.best_f, *epsilon)) {
        current = std::move(candidate);
        f = fc;
        schedule = evaluator.schedule();
        if (f < result.best_f) {
          result.best = current;
          result.best_f = f;
          result.best_schedule = schedule;
          mark_reset = mark_stage = elapsed();
          emit(h, f, TraceEvent::Kind::improve);
          if (result.best_f <= 0) break;
        } else {
          emit(h, f, TraceEvent::Kind::accept);
        }
      }
    }
    const double now = elapsed();
    if (now - mark_reset >= config.reset_after) {
      current = result.best;
      f = result.best_f;
      schedule = result.best_schedule;
      epsilon = update_epsilon(result.best_f, rng, config.log_base);
      mark_reset = now;
      emit(-1, f, TraceEvent::Kind::reset);
    }
    if (now - mark_stage >= config.second_stage_after) {
      epsilon = update_epsilon(result.best_f, rng, config.log_base);
      auto stage = second_stage(result.best, result.best_f, result.best_schedule, result.best_f, *epsilon,
                                catalogue, params, evaluator, rng, config.second_stage_steps, expired);
      ++result.second_stages;
      current = std::move(stage.solution);
      f = stage.f;
      schedule = std::move(stage.schedule);
      result.pool = std::move(stage.pool);
      mark_stage = elapsed();
      emit(-1, f, TraceEvent::Kind::second_stage);
      if (stage.improved) {
        result.best = std::move(stage.best);
        result.best_f = stage.best_f;
        result.best_schedule = std::move(stage.best_schedule);
        mark_reset = mark_stage;
        emit(-1, result.best_f, TraceEvent::Kind::improve);
        if (result.best_f <= 0) break;
      }
    }
  }
  return result;
}

}  // namespace mrcmpsp
