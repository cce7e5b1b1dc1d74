#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

struct Refusal {
  EdgeId edge;
  Rational amount;
  friend bool operator==(const Refusal&, const Refusal&) = default;
};

/// Which rule produced a step.
enum class StepKind { Better, Best, ImprovementI, ImprovementII, BestIa, BestIb, BestII };
std::string_view to_string(StepKind kind);

/// One myopic change: `edge` gains `amount`, each refusal loses its amount.
struct Step {
  std::size_t job = 0;
  EdgeId edge = 0;
  Rational amount;
  /// Job-side refusals first, then machine-side, each worst-rank-first.
  std::vector<Refusal> refusals;
  StepKind kind = StepKind::Better;
  int phase = 0;
};

enum class Termination { Stable, BudgetExhausted, CycleDetected, ScriptEnd };
std::string_view to_string(Termination t);

enum class DynamicsKind { Better, Best };
std::string_view to_string(DynamicsKind k);

/// Seeded random process configuration. The generator is std::mt19937_64,
/// whose output sequence is fixed by the C++ standard.
struct RandomPolicy {
  DynamicsKind kind = DynamicsKind::Best;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  bool cycle_detection = true;
  /// Maximum number of remembered states; past it, only already stored
  /// states can be recognised.
  std::size_t state_cap = std::size_t{1} << 20;
  bool record_steps = true;
};

inline constexpr std::string_view kGeneratorName = "mt19937_64";

struct Trace {
  Allocation initial;
  std::vector<Step> steps;
  Allocation terminal;
  Termination reason = Termination::Stable;
  std::uint64_t step_count = 0;
  /// Steps taken while type-I blocking edges remained (two-phase solvers).
  std::uint64_t phase1_steps = 0;
  /// Phase-II steps after which a phase-I edge existed again; always 0 if
  /// the termination arguments hold.
  std::uint64_t phase_regressions = 0;
  std::string algorithm;
  std::optional<RandomPolicy> policy;
};

class NoBlockingEdge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t step_index, const std::string& what)
      : std::runtime_error(what), step_index_(step_index) {}
  std::size_t step_index() const { return step_index_; }

 private:
  std::size_t step_index_;
};

/// Largest single myopic increase on blocking edge e:
/// min{ free(j) + x(dominated at j), residual(e), free(m) + x(dominated at m) }.
Rational response_amount(const Instance& inst, const Allocation& x, EdgeId e);

/// Raises e by response_amount and lets both endpoints refuse worst-first
/// until feasible. `e` must block x. Mutates x in place.
Step apply_response(const Instance& inst, Allocation& x, EdgeId e, StepKind kind);

std::pair<Allocation, Step> best_response_step(const Instance& inst, const Allocation& x,
                                               std::size_t job);
std::pair<Allocation, Step> better_response_step(const Instance& inst, const Allocation& x,
                                                 std::size_t job, EdgeId edge);

void apply_step(const Instance& inst, Allocation& x, const Step& step);
/// Replays trace.steps from trace.initial.
Allocation replay(const Instance& inst, const Trace& trace);

/// Problems that make `step` an invalid better response on `before`:
/// non-blocking edge, non-positive amount, refusals off the endpoints or on
/// edges not dominated by the chosen one, or an infeasible result.
std::vector<std::string> check_better_response(const Instance& inst, const Allocation& before,
                                               const Step& step);

/// Uniform integer in [0, n) from the generator by rejection sampling, so
/// results do not depend on the standard library's distributions.
std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t n);

Trace run_random(const Instance& inst, const Allocation& x0, const RandomPolicy& policy);

struct ScriptedChoice {
  std::size_t job;
  EdgeId edge;
};

/// Applies each choice as a maximal response step. With `require_best`,
/// every edge must also be its job's best blocking edge. Throws ScriptError.
Trace replay_script(const Instance& inst, const Allocation& x0,
                    std::span<const ScriptedChoice> script, bool require_best = false);

}  // namespace stalloc
