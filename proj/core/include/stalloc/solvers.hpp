#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

/// (sum of job totals, sum of x(jm) * rank_j(jm)), compared lexicographically.
struct PotentialBetter {
  Rational theta1;
  Rational theta2;
  friend bool operator==(const PotentialBetter&, const PotentialBetter&) = default;
  friend auto operator<=>(const PotentialBetter&, const PotentialBetter&) = default;
};

PotentialBetter potential_better(const Instance& inst, const Allocation& x);

/// Positive (rank, value) pairs of a vertex, best rank first. Greater means
/// a better position: at the first rank where two positions differ, the one
/// holding more value there wins.
struct LexPosition {
  std::vector<std::pair<int, Rational>> entries;

  friend bool operator==(const LexPosition&, const LexPosition&) = default;
  friend std::strong_ordering operator<=>(const LexPosition& a, const LexPosition& b);
};

LexPosition lex_position(const Instance& inst, const Allocation& x, Vertex v);

/// (rank_j(r(j)), x(r(j))) for one job; absent when j holds nothing.
std::optional<std::pair<int, Rational>> refusal_pointer_state(const Instance& inst,
                                                              const Allocation& x, std::size_t job);

/// f(e) for every edge, consistent with all preference lists, or nothing.
using GlobalRanking = std::vector<int>;

/// Topological order of the "preferred to" relation between edges sharing
/// a vertex. Absent iff that relation has a cycle.
std::optional<GlobalRanking> derive_global_ranking(const Instance& inst);

/// Checks rank_v(uv) < rank_v(wv) <=> f(uv) < f(wv) at every vertex.
bool is_consistent_ranking(const Instance& inst, const GlobalRanking& f);

class NotCorrelated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The unique stable allocation of a correlated instance, built by fixing
/// edges in global order at min{c, remaining q(j), remaining q(m)}.
Allocation solve_correlated(const Instance& inst);

bool is_stable(const Instance& inst, const Allocation& x);

using StepObserver = std::function<void(const Allocation& before, const Step& step,
                                        const Allocation& after)>;

struct SolveOptions {
  /// 0 selects default_step_budget().
  std::uint64_t step_budget = 0;
  bool record_steps = true;
  StepObserver observer;
};

/// Ten times a bound on the number of steps implied by the unit of the
/// input data; saturates at UINT64_MAX.
std::uint64_t default_step_budget(const Instance& inst, const Allocation& x0);

/// Phase I: Improvement I on the lowest-index job's best type-I edge, with
/// the job refusing from r(j) even when it has free quota. Phase II:
/// Improvement II on best type-II edges. Returns a trace ending stable.
Trace two_phase_better(const Instance& inst, const Allocation& x0, const SolveOptions& options = {});

/// Best-response steps only: first on jobs whose best blocking edge is of
/// type I(a)/I(b), then on type II. Returns a trace ending stable.
Trace two_phase_best(const Instance& inst, const Allocation& x0, const SolveOptions& options = {});

}  // namespace stalloc
