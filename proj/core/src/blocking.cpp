#include "stalloc/blocking.hpp"

#include <stdexcept>

namespace stalloc {

std::string_view to_string(BlockKind kind) {
  return kind == BlockKind::TypeI ? "TYPE_I" : "TYPE_II";
}

std::string_view to_string(BestKind kind) {
  switch (kind) {
    case BestKind::TypeIa: return "TYPE_IA";
    case BestKind::TypeIb: return "TYPE_IB";
    case BestKind::TypeII: return "TYPE_II";
  }
  return "?";
}

bool dominates_at(const Instance& inst, const Allocation& x, EdgeId e, Vertex v) {
  if (!inst.incident_to(e, v)) throw std::invalid_argument("edge not incident to vertex");
  if (x.allocated(v) < inst.quota(v)) return true;
  const auto worst = worst_allocated_edge(inst, x, v);
  return worst && inst.rank(v, e) < inst.rank(v, *worst);
}

bool blocks(const Instance& inst, const Allocation& x, EdgeId e) {
  return x[e] < inst.capacity(e) && dominates_at(inst, x, e, inst.job_of(e)) &&
         dominates_at(inst, x, e, inst.machine_of(e));
}

std::optional<BlockKind> blocking_kind(const Instance& inst, const Allocation& x, EdgeId e) {
  if (!blocks(inst, x, e)) return std::nullopt;
  const Vertex j = inst.job_of(e);
  const auto worst = worst_allocated_edge(inst, x, j);
  if (worst && inst.rank(j, e) < inst.rank(j, *worst)) return BlockKind::TypeI;
  return BlockKind::TypeII;
}

BlockingReport blocking_edges(const Instance& inst, const Allocation& x) {
  BlockingReport report;
  report.best_per_job.resize(inst.num_jobs());
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    for (EdgeId e : inst.incident(Vertex::job(j))) {
      if (auto kind = blocking_kind(inst, x, e)) {
        report.edges.push_back({e, *kind});
        if (!report.best_per_job[j]) report.best_per_job[j] = e;
      }
    }
  }
  return report;
}

std::vector<EdgeId> blocking_edges_of(const Instance& inst, const Allocation& x, std::size_t job) {
  std::vector<EdgeId> out;
  for (EdgeId e : inst.incident(Vertex::job(job))) {
    if (blocks(inst, x, e)) out.push_back(e);
  }
  return out;
}

std::optional<EdgeId> best_blocking_edge(const Instance& inst, const Allocation& x, std::size_t job) {
  for (EdgeId e : inst.incident(Vertex::job(job))) {
    if (blocks(inst, x, e)) return e;
  }
  return std::nullopt;
}

std::optional<BestBlocking> classify_best_response(const Instance& inst, const Allocation& x,
                                                   std::size_t job) {
  const auto best = best_blocking_edge(inst, x, job);
  if (!best) return std::nullopt;
  const Vertex j = Vertex::job(job);
  const Vertex m = inst.machine_of(*best);
  const auto worst = worst_allocated_edge(inst, x, j);
  if (!worst || inst.rank(j, *best) >= inst.rank(j, *worst)) {
    return BestBlocking{*best, BestKind::TypeII};
  }
  const Rational bound = min(residual(inst, x, *best),
                             residual(inst, x, m) + dominated_value(inst, x, *best, m));
  const BestKind kind = residual(inst, x, j) < bound ? BestKind::TypeIa : BestKind::TypeIb;
  return BestBlocking{*best, kind};
}

}  // namespace stalloc
