#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "stalloc/allocation.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

enum class GeneratorKind {
  Fig1Cycle,         // 3x3 matching instance with a best-response cycle
  Fig2Example,       // the running example with its unstable allocation
  Fig5Left,          // slow phase I for two-phase better response
  Fig5Right,         // slow phase II for two-phase better response
  ExpBest,           // the 2N-step best-response instance
  RandomGeneral,
  RandomCorrelated,
};

std::optional<GeneratorKind> parse_generator_kind(std::string_view name);
std::string_view to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Fig2Example;
  /// N for the parametric worst-case instances.
  long n = 1;
  std::size_t jobs = 4;
  std::size_t machines = 4;
  /// Probability that a job-machine pair is an edge, in (0, 1].
  double density = 0.5;
  /// Quotas and capacities are drawn from {1/4, 2/4, ..., max}.
  int max_quota = 3;
  int max_capacity = 2;
  std::uint64_t seed = 0;
};

struct Generated {
  Instance instance;
  Allocation x;
};

/// Builds the requested instance with its initial allocation: the figure's
/// allocation for the fixed examples, x(j1m1) = x(j2m2) = N for fig5_left
/// and exp_best, zero for fig5_right, and a random feasible allocation for
/// the random kinds. Throws std::invalid_argument on bad parameters.
Generated generate(const GeneratorSpec& spec);

}  // namespace stalloc
