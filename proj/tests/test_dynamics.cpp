#include <gtest/gtest.h>

#include <array>
#include <sstream>

#include "stalloc/blocking.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/solvers.hpp"
#include "stalloc/trace_io.hpp"
#include "support.hpp"

namespace stalloc {
namespace {

using testing::edge_named;
using testing::q;
namespace oracle = testing::oracle;

TEST(BestResponse, Fig2JobThree) {
  const auto g = testing::fig2();
  const Instance& inst = g.instance;
  const auto [x, step] = best_response_step(inst, g.x, 2);
  const EdgeId j3m1 = edge_named(inst, "j3", "m1");
  const EdgeId j3m2 = edge_named(inst, "j3", "m2");
  const EdgeId j1m1 = edge_named(inst, "j1", "m1");
  EXPECT_EQ(step.edge, j3m1);
  EXPECT_EQ(step.amount, Rational(1));
  EXPECT_EQ(x[j3m1], Rational(1));
  EXPECT_EQ(x[j3m2], q(9, 10));
  EXPECT_EQ(x[j1m1], q(4, 5));
  EXPECT_EQ(x[edge_named(inst, "j2", "m1")], Rational(1));
  EXPECT_EQ(x[edge_named(inst, "j4", "m3")], Rational(1));
  EXPECT_EQ(total_value(x), q(47, 10));
  const std::vector<Refusal> expected = {{j3m2, q(1, 10)}, {j1m1, q(1, 5)}};
  EXPECT_EQ(step.refusals, expected);
  EXPECT_EQ(response_amount(inst, g.x, j3m1), Rational(1));
}

TEST(BestResponse, SingleEdgeFromZero) {
  RawInstance raw;
  raw.jobs = {{"j1", q(3, 2)}};
  raw.machines = {{"m1", q(5, 4)}};
  raw.edges = {{"j1", "m1", 2, 1, 1}};
  const Instance inst = Instance::validate(raw);
  const auto [x, step] = best_response_step(inst, Allocation(inst), 0);
  EXPECT_EQ(x[0], q(5, 4));
  EXPECT_TRUE(step.refusals.empty());
}

TEST(BestResponse, Fig1JobOneEvictsJobThree) {
  const auto g = testing::fig1();
  const Instance& inst = g.instance;
  const auto [x, step] = best_response_step(inst, g.x, 0);
  EXPECT_EQ(step.edge, edge_named(inst, "j1", "m3"));
  EXPECT_EQ(step.amount, Rational(1));
  ASSERT_EQ(step.refusals.size(), 1u);
  EXPECT_EQ(step.refusals[0].edge, edge_named(inst, "j3", "m3"));
  EXPECT_EQ(x[edge_named(inst, "j3", "m3")], Rational(0));
}

TEST(BestResponse, ThrowsWithoutBlockingEdge) {
  const auto g = testing::fig2();
  EXPECT_THROW(best_response_step(g.instance, g.x, 0), NoBlockingEdge);
}

TEST(BetterResponse, Fig2EdgeJ3M1) {
  const auto g = testing::fig2();
  const Instance& inst = g.instance;
  const auto [x, step] = better_response_step(inst, g.x, 2, edge_named(inst, "j3", "m1"));
  EXPECT_EQ(x[edge_named(inst, "j3", "m1")], Rational(1));
  ASSERT_EQ(step.refusals.size(), 2u);
  EXPECT_EQ(step.refusals[0].edge, edge_named(inst, "j3", "m2"));
  EXPECT_EQ(step.refusals[1], (Refusal{edge_named(inst, "j1", "m1"), q(1, 5)}));
  EXPECT_THROW(better_response_step(inst, g.x, 3, edge_named(inst, "j4", "m2")), NoBlockingEdge);
}

TEST(BetterResponse, NoMachineRefusalWhenMachineHasRoom) {
  RawInstance raw;
  raw.jobs = {{"j1", 1}};
  raw.machines = {{"m1", 1}, {"m2", 3}};
  raw.edges = {{"j1", "m1", 1, 2, 1}, {"j1", "m2", 1, 1, 1}};
  const Instance inst = Instance::validate(raw);
  const Allocation x0 = make_allocation(inst, {Rational(1), Rational(0)});
  const auto [x, step] = better_response_step(inst, x0, 0, 1);
  ASSERT_EQ(step.refusals.size(), 1u);
  EXPECT_EQ(step.refusals[0].edge, 0u);  // only the job refuses
  EXPECT_EQ(x[1], Rational(1));
}

TEST(BetterResponse, Fig5LeftLimitedByMachineResidual) {
  const long n = 7;
  const auto g = testing::parametric(GeneratorKind::Fig5Left, n);
  const Instance& inst = g.instance;
  const auto [x, step] = better_response_step(inst, g.x, 0, edge_named(inst, "j1", "m2"));
  EXPECT_EQ(step.amount, Rational(1));
  EXPECT_EQ(x[edge_named(inst, "j1", "m2")], Rational(1));
  EXPECT_EQ(x[edge_named(inst, "j1", "m1")], Rational(n - 1));
  ASSERT_EQ(step.refusals.size(), 1u);
  EXPECT_EQ(step.refusals[0], (Refusal{edge_named(inst, "j1", "m1"), Rational(1)}));
}

// Every maximal step satisfies the step contract and the myopia property:
// the acting job's lexicographic position strictly improves and the machine
// keeps everything it prefers to the chosen edge.
TEST(Steps, ContractAndMyopiaOnRandomStates) {
  for (std::uint64_t i = 0; i < 150; ++i) {
    const auto g = testing::corpus_instance(i);
    const Instance& inst = g.instance;
    for (EdgeId e : oracle::blocking_set(inst, g.x)) {
      const std::size_t job = inst.edge(e).job;
      const auto [x, step] = better_response_step(inst, g.x, job, e);
      EXPECT_TRUE(check_better_response(inst, g.x, step).empty());
      EXPECT_TRUE(oracle::feasible(inst, x));
      EXPECT_TRUE(step.amount.is_positive());
      EXPECT_GT(lex_position(inst, x, Vertex::job(job)), lex_position(inst, g.x, Vertex::job(job)));
      const Vertex m = inst.machine_of(e);
      for (EdgeId f : inst.incident(m)) {
        if (inst.rank(m, f) < inst.rank(m, e)) {
          EXPECT_EQ(x[f], g.x[f]);
        }
      }
      Allocation replayed = g.x;
      apply_step(inst, replayed, step);
      EXPECT_EQ(replayed, x);
    }
    for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
      const auto best = best_blocking_edge(inst, g.x, j);
      if (!best) continue;
      const auto [x, step] = best_response_step(inst, g.x, j);
      EXPECT_EQ(step.edge, *best);
      for (EdgeId e : blocking_edges_of(inst, g.x, j)) {
        EXPECT_LE(inst.edge(step.edge).rank_at_job, inst.edge(e).rank_at_job);
      }
    }
  }
}

TEST(CheckBetterResponse, RejectsBrokenSteps) {
  const auto g = testing::fig2();
  const Instance& inst = g.instance;
  auto [x, step] = best_response_step(inst, g.x, 2);
  Step wrong_edge = step;
  wrong_edge.edge = edge_named(inst, "j4", "m2");
  EXPECT_FALSE(check_better_response(inst, g.x, wrong_edge).empty());
  Step too_much = step;
  too_much.amount = Rational(2);
  EXPECT_FALSE(check_better_response(inst, g.x, too_much).empty());
  Step bad_refusal = step;
  bad_refusal.refusals.push_back({edge_named(inst, "j2", "m1"), q(1, 10)});
  EXPECT_FALSE(check_better_response(inst, g.x, bad_refusal).empty());
}

TEST(RunRandom, StableStartGivesEmptyTrace) {
  const auto g = testing::fig2();
  const Allocation stable = two_phase_best(g.instance, g.x).terminal;
  for (auto kind : {DynamicsKind::Better, DynamicsKind::Best}) {
    const Trace t = run_random(g.instance, stable, {.kind = kind, .seed = 3});
    EXPECT_EQ(t.step_count, 0u);
    EXPECT_EQ(t.reason, Termination::Stable);
  }
}

TEST(RunRandom, DeterministicAndReplayable) {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto g = testing::corpus_instance(i);
    for (auto kind : {DynamicsKind::Better, DynamicsKind::Best}) {
      const RandomPolicy policy{.kind = kind, .seed = 100 + i, .budget = 100'000};
      const Trace a = run_random(g.instance, g.x, policy);
      const Trace b = run_random(g.instance, g.x, policy);
      ASSERT_EQ(a.step_count, b.step_count);
      EXPECT_EQ(a.terminal, b.terminal);
      EXPECT_EQ(a.reason, b.reason);
      EXPECT_EQ(replay(g.instance, a), a.terminal);
      std::ostringstream ta, tb;
      write_trace(ta, g.instance, a);
      write_trace(tb, g.instance, b);
      EXPECT_EQ(ta.str(), tb.str());
      if (a.reason == Termination::Stable) {
        EXPECT_TRUE(is_stable(g.instance, a.terminal));
      }
    }
  }
}

TEST(RunRandom, CorrelatedInstancesStabilise) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto g = testing::corpus_instance(i, GeneratorKind::RandomCorrelated);
    const Trace t = run_random(g.instance, g.x, {.kind = DynamicsKind::Better, .seed = i});
    EXPECT_EQ(t.reason, Termination::Stable);
    EXPECT_EQ(t.terminal, solve_correlated(g.instance));
  }
}

// On unit instances with at most 3+3 vertices the reachable state space is
// tiny, so a generous budget is never exhausted when cycles are detected.
TEST(RunRandom, CycleDetectionPreventsBudgetExhaustion) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = testing::random_unit_instance(seed, 1 + seed % 3, 1 + (seed / 3) % 3, 0.8);
    for (auto kind : {DynamicsKind::Better, DynamicsKind::Best}) {
      const Trace t = run_random(inst, Allocation(inst), {.kind = kind, .seed = seed, .budget = 5000});
      EXPECT_NE(t.reason, Termination::BudgetExhausted);
    }
  }
  const auto g = testing::fig1();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Trace t = run_random(g.instance, g.x, {.kind = DynamicsKind::Best, .seed = seed, .budget = 5000});
    EXPECT_NE(t.reason, Termination::BudgetExhausted);
  }
}

TEST(RunRandom, BudgetIsHonoured) {
  const auto g = testing::fig1();
  // Always-cycling script length is 6; a budget of 1 cannot finish.
  const Trace t = run_random(g.instance, g.x,
                             {.kind = DynamicsKind::Best, .seed = 0, .budget = 1, .cycle_detection = false});
  EXPECT_LE(t.step_count, 1u);
  if (!is_stable(g.instance, t.terminal)) {
    EXPECT_EQ(t.reason, Termination::BudgetExhausted);
  }
}

std::vector<ScriptedChoice> fig1_script(const Instance& inst) {
  const std::array<std::pair<const char*, const char*>, 6> order = {
      {{"j1", "m3"}, {"j2", "m1"}, {"j3", "m1"}, {"j1", "m2"}, {"j2", "m2"}, {"j3", "m3"}}};
  std::vector<ScriptedChoice> script;
  for (auto [j, m] : order) script.push_back({inst.find_vertex(j)->index, edge_named(inst, j, m)});
  return script;
}

TEST(ReplayScript, Fig1BestResponseCycle) {
  const auto g = testing::fig1();
  const Trace t = replay_script(g.instance, g.x, fig1_script(g.instance), true);
  EXPECT_EQ(t.step_count, 6u);
  EXPECT_EQ(t.terminal, g.x);
  EXPECT_EQ(t.reason, Termination::CycleDetected);
  for (const Step& s : t.steps) EXPECT_EQ(s.amount, Rational(1));
}

TEST(ReplayScript, EmptyScript) {
  const auto g = testing::fig2();
  const Trace t = replay_script(g.instance, g.x, {});
  EXPECT_EQ(t.step_count, 0u);
  EXPECT_EQ(t.terminal, g.x);
  EXPECT_EQ(t.reason, Termination::ScriptEnd);
}

TEST(ReplayScript, ReportsOffendingStep) {
  const auto g = testing::fig1();
  auto script = fig1_script(g.instance);
  // After j1 moves to m3 it holds its second choice; m1 is its last.
  script[1] = {0, edge_named(g.instance, "j1", "m1")};
  try {
    replay_script(g.instance, g.x, script, true);
    FAIL() << "expected ScriptError";
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.step_index(), 1u);
  }
}

TEST(TraceIo, StepsRoundTrip) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto g = testing::corpus_instance(i);
    const Trace t = run_random(g.instance, g.x, {.kind = DynamicsKind::Better, .seed = i, .budget = 10'000});
    std::ostringstream text;
    write_trace(text, g.instance, t);
    EXPECT_NE(text.str().find("generator=mt19937_64"), std::string::npos);
    const auto steps = read_trace_steps(g.instance, text.str());
    ASSERT_EQ(steps.size(), t.steps.size());
    Allocation x = g.x;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      EXPECT_EQ(steps[k].edge, t.steps[k].edge);
      EXPECT_EQ(steps[k].amount, t.steps[k].amount);
      EXPECT_EQ(steps[k].refusals, t.steps[k].refusals);
      apply_step(g.instance, x, steps[k]);
    }
    EXPECT_EQ(x, t.terminal);
  }
}

TEST(DrawBelow, StaysInRangeAndIsReproducible) {
  std::mt19937_64 a(42), b(42);
  for (std::uint64_t n = 1; n < 200; ++n) {
    const auto v = draw_below(a, n);
    EXPECT_LT(v, n);
    EXPECT_EQ(v, draw_below(b, n));
  }
}

}  // namespace
}  // namespace stalloc
