#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "mrcmpsp/constructor.hpp"
#include "mrcmpsp/hyperheuristic.hpp"
#include "support.hpp"

namespace mrcmpsp {
namespace {

using testing::Builder;
using testing::mode;

TEST(Acceptance, ThresholdIsStrict) {
  const double best = 100.0, eps = 0.05;
  EXPECT_FALSE(accept(best * (1 + eps), best * (1 + eps), best, eps));
  EXPECT_TRUE(accept(104.9, 104.9, best, eps));
  EXPECT_TRUE(accept(150.0, 151.0, best, 0.01));
  EXPECT_TRUE(accept(99.0, 99.5, 100.0, 0.0));
  EXPECT_FALSE(accept(100.0, 100.0, 100.0, 0.0));
  EXPECT_TRUE(accept(99.9, 100.0, 100.0, 0.0));
}

TEST(Epsilon, ExactPowerOfTen) {
  EXPECT_EQ(epsilon_log_term(1000.0), 3);
  EXPECT_EQ(epsilon_log_term(1001.0), 4);
  EXPECT_EQ(epsilon_log_term(10.0), 1);
  EXPECT_EQ(epsilon_log_term(9.5), 1);
  EXPECT_EQ(epsilon_log_term(0.5), 1);
  Rng rng(1);
  std::map<double, int> seen;
  const int samples = 30000;
  for (int i = 0; i < samples; ++i) ++seen[*update_epsilon(1000.0, rng)];
  ASSERT_EQ(seen.size(), 3u);
  const double expected[] = {4.0 / 1000, 5.0 / 1000, 6.0 / 1000};
  int k = 0;
  for (auto [eps, count] : seen) {
    EXPECT_DOUBLE_EQ(eps, expected[k++]);
    EXPECT_NEAR(static_cast<double>(count) / samples, 1.0 / 3, 0.015);
  }
}

TEST(Epsilon, SingleBranchValues) {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(*update_epsilon(10.0, rng), 2.0 / 10);
    EXPECT_DOUBLE_EQ(*update_epsilon(9.5, rng), 2.0 / 9.5);
  }
  EXPECT_FALSE(update_epsilon(0.0, rng).has_value());
}

TEST(Pool, ScoreProportionalSelection) {
  Rng rng(3);
  LlhPool pool({0, 1, 2}, {3, 1, 1});
  std::vector<int> hits(3, 0);
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) ++hits[select_llh(pool, rng)];
  EXPECT_NEAR(hits[0] / double(samples), 0.6, 0.01);
  EXPECT_NEAR(hits[1] / double(samples), 0.2, 0.01);
  EXPECT_NEAR(hits[2] / double(samples), 0.2, 0.01);

  LlhPool single({7}, {2});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_llh(single, rng), 7);

  LlhPool uniform(4);
  std::vector<int> u(4, 0);
  for (int i = 0; i < 40000; ++i) ++u[select_llh(uniform, rng)];
  for (int c : u) EXPECT_NEAR(c / 40000.0, 0.25, 0.01);
}

TEST(Dominance, WorkedExampleScores) {
  DominanceTracker t(4);
  EXPECT_TRUE(t.record_step(50, {0, 1}));
  EXPECT_TRUE(t.record_step(40, {0}));
  EXPECT_TRUE(t.record_step(30, {0, 2}));
  EXPECT_FALSE(t.record_step(35, {3}));
  LlhPool pool = t.pool();
  EXPECT_EQ(pool.ids(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(pool.scores(), (std::vector<int>{3, 1, 1}));
  EXPECT_DOUBLE_EQ(pool.probability(0), 0.6);
  EXPECT_DOUBLE_EQ(pool.probability(1), 0.2);
  EXPECT_DOUBLE_EQ(pool.probability(2), 0.2);
  EXPECT_DOUBLE_EQ(pool.probability(3), 0.0);
}

// Heuristic returning scripted objectives, one value per call.
Heuristic scripted(std::string name, std::vector<double> values) {
  auto calls = std::make_shared<std::size_t>(0);
  return {std::move(name), LlhClass::large, [values, calls](SequenceSolution&, const MoveInput&) {
            double v = values[std::min(*calls, values.size() - 1)];
            ++*calls;
            return MoveOutcome{true, 0, v};
          }};
}

Heuristic identity_move(std::string name) {
  return {std::move(name), LlhClass::small, [](SequenceSolution&, const MoveInput&) { return MoveOutcome::unchanged(); }};
}

struct StageFixture {
  Instance inst;
  Evaluator evaluator;
  SequenceSolution start;
  Schedule schedule;
  double f;
  StageFixture() : inst(make()), evaluator(inst) {
    Rng rng(1);
    start = random_solution(inst, rng);
    f = evaluator.evaluate(start);
    schedule = evaluator.schedule();
  }
  static Instance make() {
    Builder b;
    ProjectId p = b.project();
    b.activity(p, {mode(1), mode(2)});
    b.activity(p, {mode(1)});
    return b.build();
  }
};

TEST(SecondStage, ReplaysTheWorkedExample) {
  StageFixture fx;
  std::vector<Heuristic> llh{scripted("LLH1", {50, 40, 30, 36}), scripted("LLH2", {50, 45, 33, 37}),
                             scripted("LLH3", {55, 44, 30, 38}), scripted("LLH4", {60, 48, 34, 35})};
  Rng rng(5);
  auto never = [] { return false; };
  SecondStageResult r = second_stage(fx.start, 100.0, fx.schedule, 100.0, 0.0, llh, default_llh_params(fx.inst),
                                     fx.evaluator, rng, 4, never);
  ASSERT_EQ(r.steps.size(), 4u);
  EXPECT_EQ(r.steps[0].achievers, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.steps[1].achievers, (std::vector<int>{0}));
  EXPECT_EQ(r.steps[2].achievers, (std::vector<int>{0, 2}));
  EXPECT_FALSE(r.steps[3].non_dominated);
  EXPECT_FALSE(r.steps[3].propagated);
  EXPECT_EQ(r.pool.ids(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(r.pool.scores(), (std::vector<int>{3, 1, 1}));
  EXPECT_DOUBLE_EQ(r.pool.probability(0), 0.6);
  EXPECT_TRUE(r.improved);
  EXPECT_DOUBLE_EQ(r.best_f, 30.0);

  // Replay of the recorded trace through a fresh tracker gives the same pool.
  DominanceTracker replay(4);
  for (const auto& step : r.steps) EXPECT_EQ(replay.record_step(step.best_f, step.achievers), step.non_dominated);
  EXPECT_EQ(replay.pool().scores(), r.pool.scores());
}

TEST(SecondStage, IdentityHeuristicsFallBackToAll) {
  StageFixture fx;
  std::vector<Heuristic> llh{identity_move("a"), identity_move("b"), identity_move("c")};
  Rng rng(6);
  auto r = second_stage(fx.start, fx.f, fx.schedule, fx.f, 0.1, llh, default_llh_params(fx.inst), fx.evaluator, rng,
                        4, [] { return false; });
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.pool.ids(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(r.pool.scores(), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(r.solution, fx.start);
}

TEST(SecondStage, SingleImprovingHeuristic) {
  StageFixture fx;
  std::vector<Heuristic> llh{identity_move("a"), scripted("b", {5, 9, 9, 9})};
  Rng rng(7);
  auto r = second_stage(fx.start, 10.0, fx.schedule, 10.0, 0.0, llh, default_llh_params(fx.inst), fx.evaluator, rng, 4,
                        [] { return false; });
  EXPECT_EQ(r.pool.ids(), std::vector<int>{1});
  EXPECT_EQ(r.pool.scores(), std::vector<int>{1});
  EXPECT_DOUBLE_EQ(r.pool.probability(1), 1.0);
}

TEST(SecondStage, DeterministicPerSeed) {
  const Instance& inst = testing::data_instance("A-2");
  const auto catalogue = heuristic_catalogue(true);
  auto run = [&](std::uint64_t seed) {
    Evaluator ev(inst);
    Rng rng(seed);
    SequenceSolution s = random_solution(inst, rng);
    double f = ev.evaluate(s);
    Schedule sched = ev.schedule();
    return second_stage(s, f, sched, f, 0.01, catalogue, default_llh_params(inst), ev, rng, 4, [] { return false; });
  };
  auto a = run(9), b = run(9);
  EXPECT_EQ(a.solution, b.solution);
  EXPECT_EQ(a.pool.ids(), b.pool.ids());
  EXPECT_EQ(a.pool.scores(), b.pool.scores());
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) EXPECT_EQ(a.steps[i].achievers, b.steps[i].achievers);
}

TEST(LocalSearch, ZeroObjectiveReturnsImmediately) {
  Builder b;
  ProjectId p = b.project();
  b.activity(p, {mode(3)});
  Instance inst = b.build();
  Evaluator ev(inst);
  SequenceSolution s{{0}, {0}};
  LocalSearchConfig cfg;
  cfg.clock = ClockMode::schedules;
  cfg.budget = 1000;
  Rng rng(1);
  auto r = local_search(s, ev, rng, cfg, heuristic_catalogue());
  EXPECT_EQ(r.iterations, 0);
  EXPECT_DOUBLE_EQ(r.best_f, 0.0);
  EXPECT_EQ(ev.schedules(), 1u);
}

TEST(LocalSearch, ZeroBudgetReturnsStart) {
  const Instance& inst = testing::data_instance("A-4");
  Evaluator ev(inst);
  Rng rng(2);
  SequenceSolution s = random_solution(inst, rng);
  LocalSearchConfig cfg;
  cfg.budget = 0;
  auto r = local_search(s, ev, rng, cfg, heuristic_catalogue());
  EXPECT_EQ(r.best, s);
  EXPECT_EQ(r.iterations, 0);
}

TEST(LocalSearch, ImprovesRandomRolloutsAndTraceIsSound) {
  const Instance& inst = testing::data_instance("A-4");
  const auto catalogue = heuristic_catalogue(true);
  std::vector<double> before, after;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Evaluator ev(inst);
    Rng rng(seed);
    SequenceSolution s = random_solution(inst, rng);
    const double f0 = ev.evaluate(s);
    LocalSearchConfig cfg;
    cfg.clock = ClockMode::schedules;
    cfg.budget = 20000;
    cfg.reset_after = 4000;
    cfg.second_stage_after = 12000;
    std::vector<TraceEvent> trace;
    auto r = local_search(s, ev, rng, cfg, catalogue, &trace);
    before.push_back(f0);
    after.push_back(r.best_f);
    EXPECT_TRUE(check_sequence(inst, r.best).empty());
    Evaluator check(inst);
    EXPECT_DOUBLE_EQ(check.evaluate(r.best), r.best_f);
    EXPECT_EQ(check.schedule(), r.best_schedule);

    double best = f0, current = f0;
    for (const TraceEvent& e : trace) {
      switch (e.kind) {
        case TraceEvent::Kind::improve:
          ASSERT_LT(e.f, best);
          best = current = e.f;
          break;
        case TraceEvent::Kind::accept:
          ASSERT_TRUE(e.f < current || e.f < (1 + e.epsilon) * best);
          ASSERT_GE(e.f, best);
          current = e.f;
          break;
        case TraceEvent::Kind::reset:
          ASSERT_EQ(e.f, best);
          current = e.f;
          break;
        case TraceEvent::Kind::second_stage:
          current = e.f;
          break;
      }
    }
    EXPECT_DOUBLE_EQ(best, r.best_f);
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  EXPECT_LT(after[10], before[10]);
}

TEST(LocalSearch, ParamsFromInstance) {
  const Instance& inst = testing::data_instance("B-9");
  LlhParams p = default_llh_params(inst);
  // 640 activities including the dummy source and sink of each project.
  ASSERT_EQ(inst.num_activities(), 640);
  EXPECT_EQ(p.fils_window, 32);
  EXPECT_EQ(p.rr_min, 2);
  EXPECT_EQ(p.rr_max, 32);
}

}  // namespace
}  // namespace mrcmpsp
