#include <benchmark/benchmark.h>

#include <cstdint>

#include "stalloc/accelerated.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/generators.hpp"
#include "stalloc/solvers.hpp"

namespace {

using namespace stalloc;

Generated random_instance(GeneratorKind kind, std::int64_t side, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.jobs = static_cast<std::size_t>(side);
  spec.machines = static_cast<std::size_t>(side);
  spec.density = 0.5;
  spec.seed = seed;
  return generate(spec);
}

Generated parametric(GeneratorKind kind, std::int64_t n) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.n = n;
  return generate(spec);
}

void BM_TwoPhaseBetter(benchmark::State& state) {
  const auto g = random_instance(GeneratorKind::RandomGeneral, state.range(0), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_phase_better(g.instance, g.x, {.record_steps = false}));
  }
}
BENCHMARK(BM_TwoPhaseBetter)->RangeMultiplier(2)->Range(4, 32);

void BM_TwoPhaseBest(benchmark::State& state) {
  const auto g = random_instance(GeneratorKind::RandomGeneral, state.range(0), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_phase_best(g.instance, g.x, {.record_steps = false}));
  }
}
BENCHMARK(BM_TwoPhaseBest)->RangeMultiplier(2)->Range(4, 32);

void BM_Accelerated(benchmark::State& state) {
  const auto g = random_instance(GeneratorKind::RandomGeneral, state.range(0), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(accelerated_solve(g.instance, g.x, {.record_rounds = false}));
  }
}
BENCHMARK(BM_Accelerated)->RangeMultiplier(2)->Range(4, 32);

void BM_SolveCorrelated(benchmark::State& state) {
  const auto g = random_instance(GeneratorKind::RandomCorrelated, state.range(0), 23);
  for (auto _ : state) benchmark::DoNotOptimize(solve_correlated(g.instance));
}
BENCHMARK(BM_SolveCorrelated)->RangeMultiplier(2)->Range(4, 32);

void BM_RandomBest(benchmark::State& state) {
  const auto g = random_instance(GeneratorKind::RandomGeneral, state.range(0), 29);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_random(g.instance, g.x, {.kind = DynamicsKind::Best, .seed = seed++, .record_steps = false}));
  }
}
BENCHMARK(BM_RandomBest)->RangeMultiplier(2)->Range(4, 16);

// Step count of the better-response solver grows with the values on the
// Fig 5 instance; the accelerated round count does not.
void BM_Fig5Better(benchmark::State& state) {
  const auto g = parametric(GeneratorKind::Fig5Left, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_phase_better(g.instance, g.x, {.record_steps = false}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fig5Better)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);

void BM_Fig5Accelerated(benchmark::State& state) {
  const auto g = parametric(GeneratorKind::Fig5Left, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(accelerated_solve(g.instance, g.x, {.record_rounds = false}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fig5Accelerated)->RangeMultiplier(10)->Range(10, 1000000)->Complexity(benchmark::o1);

void BM_ExpBest(benchmark::State& state) {
  const auto g = parametric(GeneratorKind::ExpBest, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_phase_best(g.instance, g.x, {.record_steps = false}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExpBest)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);

}  // namespace
BENCHMARK_MAIN();
