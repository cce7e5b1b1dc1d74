#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

/// Better-response classification: TypeI when the job prefers the edge to
/// its worst positively allocated edge, TypeII when it merely has free quota.
enum class BlockKind { TypeI, TypeII };

/// Best-response classification of a job's best blocking edge.
enum class BestKind { TypeIa, TypeIb, TypeII };

std::string_view to_string(BlockKind kind);
std::string_view to_string(BestKind kind);

struct BlockingEdge {
  EdgeId edge;
  BlockKind kind;
  friend bool operator==(const BlockingEdge&, const BlockingEdge&) = default;
};

struct BlockingReport {
  /// Sorted by (job index, rank at job).
  std::vector<BlockingEdge> edges;
  /// Per job, its best-ranked blocking edge.
  std::vector<std::optional<EdgeId>> best_per_job;

  bool empty() const { return edges.empty(); }
};

/// x(v) < q(v), or v prefers e to its worst positively allocated edge.
/// Throws std::invalid_argument when e is not incident to v.
bool dominates_at(const Instance& inst, const Allocation& x, EdgeId e, Vertex v);

/// Unsaturated and dominating x at both endpoints.
bool blocks(const Instance& inst, const Allocation& x, EdgeId e);

/// Kind of e if it blocks x.
std::optional<BlockKind> blocking_kind(const Instance& inst, const Allocation& x, EdgeId e);

BlockingReport blocking_edges(const Instance& inst, const Allocation& x);

/// Blocking edges of one job, best first.
std::vector<EdgeId> blocking_edges_of(const Instance& inst, const Allocation& x, std::size_t job);

std::optional<EdgeId> best_blocking_edge(const Instance& inst, const Allocation& x, std::size_t job);

struct BestBlocking {
  EdgeId edge;
  BestKind kind;
  friend bool operator==(const BestBlocking&, const BestBlocking&) = default;
};

/// The job's best blocking edge jm with its I(a)/I(b)/II class. With
/// jm better than r(j), it is I(a) when the free quota of j is below
/// min{residual of jm, residual of m + x(edges dominated by jm at m)}
/// (so j must refuse), I(b) otherwise.
std::optional<BestBlocking> classify_best_response(const Instance& inst, const Allocation& x,
                                                   std::size_t job);

}  // namespace stalloc
