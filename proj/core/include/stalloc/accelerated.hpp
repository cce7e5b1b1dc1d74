#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

/// Role of an edge in the helper graph.
enum class HelperRole : std::uint8_t {
  None,
  Blocking,          // P: type-I blocking edge
  PossiblyBlocking,  // P': unsaturated, job prefers it to r(j), machine has an R-edge
};

/// Helper graph H(x): P, P', the refusal pointers R and each machine's best
/// proposal edge over P and P'. Supports full construction and incremental
/// repair after an augmentation.
class HelperGraph {
 public:
  static HelperGraph build(const Instance& inst, const Allocation& x);

  /// Repairs the graph after the values of `changed` edges moved from the
  /// state it was built for to `x`. Only vertices around those edges are
  /// revisited.
  void update(const Instance& inst, const Allocation& x, const std::vector<EdgeId>& changed);

  HelperRole role(EdgeId e) const { return roles_[e]; }
  std::optional<EdgeId> refusal(std::size_t job) const { return refusal_[job]; }
  std::optional<EdgeId> best_proposal(std::size_t machine) const { return best_proposal_[machine]; }
  bool has_blocking_edge(std::size_t machine) const { return blocking_at_[machine] > 0; }
  std::size_t num_blocking() const { return num_blocking_; }

  std::vector<EdgeId> blocking() const;
  std::vector<EdgeId> possibly_blocking() const;
  std::vector<EdgeId> refusal_edges() const;

  /// At every machine, P-edges must rank above P'-edges.
  std::vector<std::string> proposal_order_violations(const Instance& inst) const;

  friend bool operator==(const HelperGraph& a, const HelperGraph& b) {
    return a.roles_ == b.roles_ && a.refusal_ == b.refusal_;
  }

 private:
  HelperRole classify(const Instance& inst, const Allocation& x, EdgeId e) const;
  void set_role(const Instance& inst, EdgeId e, HelperRole role);
  void refresh_best_proposal(const Instance& inst, std::size_t machine);

  std::vector<HelperRole> roles_;
  std::vector<std::optional<EdgeId>> refusal_;
  std::vector<int> refusals_at_;
  std::vector<int> blocking_at_;
  std::vector<std::optional<EdgeId>> best_proposal_;
  std::size_t num_blocking_ = 0;
};

/// Alternating proposal/refusal walk. edges = (p1, r1, p2, r2, ...), p1 a
/// P-edge at start_machine. A pure cycle returns to start_machine.
struct AltWalk {
  std::vector<EdgeId> edges;
  std::size_t start_machine = 0;
  std::size_t end_machine = 0;
  bool is_cycle = false;

  std::vector<EdgeId> proposals() const;
  std::vector<EdgeId> refusals() const;
};

/// Starts at the lowest-index machine owning a P-edge, follows best proposal
/// edges and refusal pointers until a machine has no proposal edge, its best
/// proposal leads to a visited job, or a machine repeats. Throws
/// std::logic_error when P is empty.
AltWalk find_walk(const HelperGraph& helper, const Instance& inst, const Allocation& x);

struct Augmentation {
  Rational amount;
  /// Off-walk refusals by the start machine, worst-first (walks only).
  std::vector<Refusal> start_refusals;
  /// Every edge whose value changed.
  std::vector<EdgeId> changed;
};

/// Augments x in place along `walk`.
Augmentation augment(const Instance& inst, Allocation& x, const AltWalk& walk);

/// theta1: rank_j(r(j)) per job (|M|+1 if absent); theta2: -rank_m(best
/// proposal edge) per machine (-(|J|+1) if absent).
struct PotentialAccel {
  std::vector<int> theta1;
  std::vector<int> theta2;
  friend bool operator==(const PotentialAccel&, const PotentialAccel&) = default;
};

PotentialAccel potential_accel(const Instance& inst, const HelperGraph& helper);

/// `after` < `before`: theta1 componentwise no larger and smaller somewhere,
/// or theta1 equal and theta2 componentwise no larger and smaller somewhere.
bool strictly_decreased(const PotentialAccel& before, const PotentialAccel& after);

struct RoundRecord {
  AltWalk walk;
  Rational amount;
  std::vector<Refusal> start_refusals;
  PotentialAccel potential_before;
  PotentialAccel potential_after;
};

struct RoundEvent {
  const RoundRecord& record;
  const Allocation& x_before;
  const Allocation& x_after;
  const HelperGraph& helper_before;
  const HelperGraph& helper_after;
};

struct AcceleratedOptions {
  /// 0 selects 100 * |V| * |E| + 100.
  std::uint64_t round_budget = 0;
  /// Rebuild H(x) from scratch each round and throw std::logic_error when the
  /// incremental repair disagrees.
  bool verify_updates = false;
  bool record_rounds = true;
  std::function<void(const RoundEvent&)> observer;
};

struct PhaseResult {
  Allocation x;
  std::uint64_t rounds = 0;
  std::uint64_t modifications = 0;
  std::vector<RoundRecord> log;
};

/// Augments along alternating walks until no type-I blocking edge remains.
PhaseResult accelerated_phase1(const Instance& inst, const Allocation& x0,
                               const AcceleratedOptions& options = {});

/// Modified instance for the second phase: machines become the active side,
/// a dummy passive vertex is adjacent to every machine (capacity = largest
/// machine quota, ranked last by every machine, quota = sum of machine
/// quotas) and absorbs each machine's free quota. Original edge ids are
/// kept; dummy edges follow in machine order.
struct PhaseTwoInstance {
  Instance instance;
  Allocation x;
  std::size_t original_edges = 0;
};

PhaseTwoInstance make_phase_two_instance(const Instance& inst, const Allocation& x);

/// Runs the first phase on the modified instance and restricts the result
/// to the original edges. The input must have no type-I blocking edge.
PhaseResult accelerated_phase2(const Instance& inst, const Allocation& x,
                               const AcceleratedOptions& options = {});

struct AcceleratedResult {
  Allocation x;
  PhaseResult phase1;
  PhaseResult phase2;
  std::uint64_t modifications() const { return phase1.modifications + phase2.modifications; }
};

AcceleratedResult accelerated_solve(const Instance& inst, const Allocation& x0,
                                    const AcceleratedOptions& options = {});

}  // namespace stalloc
