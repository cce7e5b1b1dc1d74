#include "stalloc/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "embedded_fixtures.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/instance_io.hpp"

namespace stalloc {

namespace {

constexpr struct {
  GeneratorKind kind;
  std::string_view name;
} kNames[] = {
    {GeneratorKind::Fig1Cycle, "fig1_cycle"},     {GeneratorKind::Fig2Example, "fig2_example"},
    {GeneratorKind::Fig5Left, "fig5_left"},       {GeneratorKind::Fig5Right, "fig5_right"},
    {GeneratorKind::ExpBest, "exp_best"},         {GeneratorKind::RandomGeneral, "random_general"},
    {GeneratorKind::RandomCorrelated, "random_correlated"},
};

constexpr int kGrid = 4;

Generated from_fixture(const char* text) {
  ParsedInstance parsed = parse_instance(text);
  Allocation x = parsed.allocation ? std::move(*parsed.allocation) : Allocation(parsed.instance);
  return {std::move(parsed.instance), std::move(x)};
}

struct TwoByTwo {
  Rational q_j1, q_j2, q_m1, q_m2;
  // Ranks as (rank_at_job, rank_at_machine) for j1m1, j1m2, j2m1, j2m2.
  int ranks[4][2];
};

Generated two_by_two(const TwoByTwo& d, const Rational& capacity, bool preload) {
  RawInstance raw;
  raw.jobs = {{"j1", d.q_j1}, {"j2", d.q_j2}};
  raw.machines = {{"m1", d.q_m1}, {"m2", d.q_m2}};
  const char* pairs[4][2] = {{"j1", "m1"}, {"j1", "m2"}, {"j2", "m1"}, {"j2", "m2"}};
  for (int i = 0; i < 4; ++i) {
    raw.edges.push_back({pairs[i][0], pairs[i][1], capacity, d.ranks[i][0], d.ranks[i][1]});
  }
  Instance inst = Instance::validate(raw);
  Allocation x(inst);
  if (preload) {
    x.set(inst, 0, capacity);
    x.set(inst, 3, capacity);
  }
  return {std::move(inst), std::move(x)};
}

Rational grid_value(std::mt19937_64& gen, int max_units) {
  const auto k = 1 + draw_below(gen, static_cast<std::uint64_t>(max_units) * kGrid);
  return Rational(static_cast<long>(k), kGrid);
}

void shuffle(std::mt19937_64& gen, std::vector<EdgeId>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[draw_below(gen, i)]);
  }
}

Generated random_instance(const GeneratorSpec& spec, bool correlated) {
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
  if (spec.max_quota < 1 || spec.max_capacity < 1) {
    throw std::invalid_argument("max_quota and max_capacity must be at least 1");
  }
  std::mt19937_64 gen(spec.seed);
  RawInstance raw;
  for (std::size_t j = 0; j < spec.jobs; ++j) {
    raw.jobs.push_back({"j" + std::to_string(j + 1), grid_value(gen, spec.max_quota)});
  }
  for (std::size_t m = 0; m < spec.machines; ++m) {
    raw.machines.push_back({"m" + std::to_string(m + 1), grid_value(gen, spec.max_quota)});
  }
  constexpr std::uint64_t kScale = 1'000'000;
  const auto threshold = static_cast<std::uint64_t>(spec.density * static_cast<double>(kScale));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < spec.jobs; ++j) {
    for (std::size_t m = 0; m < spec.machines; ++m) {
      if (draw_below(gen, kScale) < threshold) pairs.emplace_back(j, m);
    }
  }
  const std::size_t n = pairs.size();

  // Order edges at each vertex: by a global permutation when correlated,
  // by an independent shuffle per vertex otherwise.
  std::vector<EdgeId> global(n);
  std::iota(global.begin(), global.end(), EdgeId{0});
  shuffle(gen, global);
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[global[i]] = i;

  std::vector<std::vector<EdgeId>> at_job(spec.jobs), at_machine(spec.machines);
  for (EdgeId e = 0; e < n; ++e) {
    at_job[pairs[e].first].push_back(e);
    at_machine[pairs[e].second].push_back(e);
  }
  std::vector<int> rank_job(n), rank_machine(n);
  auto assign = [&](std::vector<EdgeId>& list, std::vector<int>& rank) {
    if (correlated) {
      std::sort(list.begin(), list.end(), [&](EdgeId a, EdgeId b) { return position[a] < position[b]; });
    } else {
      shuffle(gen, list);
    }
    for (std::size_t i = 0; i < list.size(); ++i) rank[list[i]] = static_cast<int>(i) + 1;
  };
  for (auto& list : at_job) assign(list, rank_job);
  for (auto& list : at_machine) assign(list, rank_machine);

  for (EdgeId e = 0; e < n; ++e) {
    raw.edges.push_back({raw.jobs[pairs[e].first].name, raw.machines[pairs[e].second].name,
                         grid_value(gen, spec.max_capacity), rank_job[e], rank_machine[e]});
  }
  Instance inst = Instance::validate(raw);

  // Random feasible start: visit edges in random order and take a random
  // quarter-multiple of what is still available.
  Allocation x(inst);
  std::vector<EdgeId> order(n);
  std::iota(order.begin(), order.end(), EdgeId{0});
  shuffle(gen, order);
  for (EdgeId e : order) {
    const Rational room = min(inst.capacity(e), min(residual(inst, x, inst.job_of(e)),
                                                    residual(inst, x, inst.machine_of(e))));
    const auto k = static_cast<long>(draw_below(gen, kGrid + 1));
    if (k > 0 && room.is_positive()) x.set(inst, e, room * Rational(k, kGrid));
  }
  return {std::move(inst), std::move(x)};
}

}  // namespace

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  for (const auto& entry : kNames) {
    if (entry.name == name) return entry.kind;
  }
  return std::nullopt;
}

std::string_view to_string(GeneratorKind kind) {
  for (const auto& entry : kNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "?";
}

Generated generate(const GeneratorSpec& spec) {
  const Rational n(spec.n);
  switch (spec.kind) {
    case GeneratorKind::Fig1Cycle:
      return from_fixture(fixtures::kFig1);
    case GeneratorKind::Fig2Example:
      return from_fixture(fixtures::kFig2);
    case GeneratorKind::Fig5Left:
    case GeneratorKind::Fig5Right:
    case GeneratorKind::ExpBest:
      if (spec.n < 1) throw std::invalid_argument("N must be at least 1");
      break;
    case GeneratorKind::RandomGeneral:
      return random_instance(spec, false);
    case GeneratorKind::RandomCorrelated:
      return random_instance(spec, true);
  }
  const Rational n1 = n + Rational(1);
  if (spec.kind == GeneratorKind::Fig5Left) {
    // j1 prefers m2, j2 prefers m1; each machine prefers its preloaded job.
    return two_by_two({n, n, n, n1, {{2, 1}, {1, 2}, {1, 2}, {2, 1}}}, n, true);
  }
  if (spec.kind == GeneratorKind::Fig5Right) {
    return two_by_two({n1, n, n, n, {{2, 1}, {1, 2}, {1, 2}, {2, 1}}}, n, false);
  }
  // Cyclic first choices: j1 -> m1 -> j2 -> m2 -> j1.
  return two_by_two({n1, n, n, n, {{1, 2}, {2, 1}, {2, 1}, {1, 2}}}, n, true);
}

}  // namespace stalloc
