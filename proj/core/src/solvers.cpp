#include "stalloc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "stalloc/blocking.hpp"

namespace stalloc {

PotentialBetter potential_better(const Instance& inst, const Allocation& x) {
  PotentialBetter p;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    p.theta1 += x[e];
    p.theta2 += x[e] * Rational(inst.edge(e).rank_at_job);
  }
  return p;
}

std::strong_ordering operator<=>(const LexPosition& a, const LexPosition& b) {
  const std::size_t n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [ra, va] = a.entries[i];
    const auto& [rb, vb] = b.entries[i];
    if (ra != rb) return ra < rb ? std::strong_ordering::greater : std::strong_ordering::less;
    if (va != vb) return va <=> vb;
  }
  return a.entries.size() <=> b.entries.size();
}

LexPosition lex_position(const Instance& inst, const Allocation& x, Vertex v) {
  LexPosition pos;
  for (EdgeId e : inst.incident(v)) {
    if (x[e].is_positive()) pos.entries.emplace_back(inst.rank(v, e), x[e]);
  }
  return pos;
}

std::optional<std::pair<int, Rational>> refusal_pointer_state(const Instance& inst,
                                                              const Allocation& x, std::size_t job) {
  const Vertex j = Vertex::job(job);
  const auto worst = worst_allocated_edge(inst, x, j);
  if (!worst) return std::nullopt;
  return std::make_pair(inst.rank(j, *worst), x[*worst]);
}

std::optional<GlobalRanking> derive_global_ranking(const Instance& inst) {
  const std::size_t n = inst.num_edges();
  std::vector<std::vector<EdgeId>> succ(n);
  std::vector<int> indegree(n, 0);
  auto add_chain = [&](Vertex v) {
    const auto adj = inst.incident(v);
    for (std::size_t i = 1; i < adj.size(); ++i) {
      succ[adj[i - 1]].push_back(adj[i]);
      ++indegree[adj[i]];
    }
  };
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) add_chain(Vertex::job(j));
  for (std::size_t m = 0; m < inst.num_machines(); ++m) add_chain(Vertex::machine(m));

  std::priority_queue<EdgeId, std::vector<EdgeId>, std::greater<>> ready;
  for (EdgeId e = 0; e < n; ++e) {
    if (indegree[e] == 0) ready.push(e);
  }
  GlobalRanking f(n, 0);
  int next = 1;
  while (!ready.empty()) {
    const EdgeId e = ready.top();
    ready.pop();
    f[e] = next++;
    for (EdgeId s : succ[e]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (next != static_cast<int>(n) + 1) return std::nullopt;
  return f;
}

bool is_consistent_ranking(const Instance& inst, const GlobalRanking& f) {
  if (f.size() != inst.num_edges()) return false;
  std::vector<int> sorted = f;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  auto chain_ok = [&](Vertex v) {
    const auto adj = inst.incident(v);
    for (std::size_t i = 1; i < adj.size(); ++i) {
      if (f[adj[i - 1]] >= f[adj[i]]) return false;
    }
    return true;
  };
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    if (!chain_ok(Vertex::job(j))) return false;
  }
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    if (!chain_ok(Vertex::machine(m))) return false;
  }
  return true;
}

Allocation solve_correlated(const Instance& inst) {
  const auto f = derive_global_ranking(inst);
  if (!f) throw NotCorrelated("instance is not correlated: preferences contain a cycle");
  std::vector<EdgeId> order(inst.num_edges());
  for (EdgeId e = 0; e < order.size(); ++e) order[static_cast<std::size_t>((*f)[e] - 1)] = e;

  Allocation x(inst);
  for (EdgeId e : order) {
    const Vertex j = inst.job_of(e);
    const Vertex m = inst.machine_of(e);
    const Rational value =
        min(inst.capacity(e), min(residual(inst, x, j), residual(inst, x, m)));
    x.set(inst, e, value);
  }
  return x;
}

bool is_stable(const Instance& inst, const Allocation& x) {
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (blocks(inst, x, e)) return false;
  }
  return true;
}

std::uint64_t default_step_budget(const Instance& inst, const Allocation& x0) {
  // All values stay multiples of u = 1/L, L the lcm of every denominator.
  Rational lcm(1);
  auto fold = [&](const Rational& r) { lcm = denominator_lcm(lcm, r); };
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) fold(inst.quota(Vertex::job(j)));
  for (std::size_t m = 0; m < inst.num_machines(); ++m) fold(inst.quota(Vertex::machine(m)));
  Rational capacity_sum;
  std::size_t max_degree = 1;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    fold(inst.capacity(e));
    fold(x0[e]);
    capacity_sum += inst.capacity(e);
  }
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    max_degree = std::max(max_degree, inst.degree(Vertex::job(j)));
  }
  // Phase I walks (theta1, theta2) down a grid of step u; phase II moves
  // machine positions on a grid of the same size.
  const double units = (capacity_sum * lcm).to_double();
  const double bound = 10.0 * (units + 1.0) * (units * static_cast<double>(max_degree) + 1.0) *
                       (static_cast<double>(inst.num_edges()) + 1.0);
  if (!(bound < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(bound) + 16;
}

namespace {

std::optional<EdgeId> first_type_one_edge(const Instance& inst, const Allocation& x) {
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    const Vertex job = Vertex::job(j);
    const auto worst = worst_allocated_edge(inst, x, job);
    if (!worst) continue;
    for (EdgeId e : inst.incident(job)) {
      if (e == *worst) break;
      if (blocks(inst, x, e)) return e;
    }
  }
  return std::nullopt;
}

std::optional<EdgeId> first_blocking_edge(const Instance& inst, const Allocation& x) {
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    if (auto e = best_blocking_edge(inst, x, j)) return e;
  }
  return std::nullopt;
}

Step improvement_one(const Instance& inst, Allocation& x, EdgeId e) {
  const Vertex j = inst.job_of(e);
  const Vertex m = inst.machine_of(e);
  const EdgeId rj = *worst_allocated_edge(inst, x, j);
  Step step{j.index, e, {}, {}, StepKind::ImprovementI, 1};
  if (x.allocated(m) < inst.quota(m)) {
    step.amount = min(min(x[rj], residual(inst, x, e)), residual(inst, x, m));
    step.refusals.push_back({rj, step.amount});
  } else {
    const EdgeId rm = *worst_allocated_edge(inst, x, m);
    step.amount = min(min(x[rj], residual(inst, x, e)), x[rm]);
    step.refusals.push_back({rj, step.amount});
    step.refusals.push_back({rm, step.amount});
  }
  apply_step(inst, x, step);
  return step;
}

Step improvement_two(const Instance& inst, Allocation& x, EdgeId e) {
  const Vertex j = inst.job_of(e);
  const Vertex m = inst.machine_of(e);
  Step step{j.index, e, {}, {}, StepKind::ImprovementII, 2};
  if (x.allocated(m) < inst.quota(m)) {
    step.amount = min(min(residual(inst, x, e), residual(inst, x, j)), residual(inst, x, m));
  } else {
    const EdgeId rm = *worst_allocated_edge(inst, x, m);
    step.amount = min(min(x[rm], residual(inst, x, e)), residual(inst, x, j));
    step.refusals.push_back({rm, step.amount});
  }
  apply_step(inst, x, step);
  return step;
}

class Driver {
 public:
  Driver(const Instance& inst, const Allocation& x0, const SolveOptions& options, const char* name)
      : inst_(inst), options_(options), x_(x0) {
    trace_.initial = x0;
    trace_.algorithm = name;
    budget_ = options.step_budget ? options.step_budget : default_step_budget(inst, x0);
  }

  Allocation& x() { return x_; }

  template <typename Apply>
  void step(Apply&& apply) {
    if (trace_.step_count >= budget_) {
      throw BudgetExceeded(trace_.algorithm + ": step budget of " + std::to_string(budget_) +
                           " exhausted; blocking edges remain");
    }
    std::optional<Allocation> before;
    if (options_.observer) before = x_;
    Step s = apply(x_);
    ++trace_.step_count;
    if (s.phase == 1) {
      ++trace_.phase1_steps;
      if (in_phase_two_) ++trace_.phase_regressions;
    } else {
      in_phase_two_ = true;
    }
    if (options_.observer) options_.observer(*before, s, x_);
    if (options_.record_steps) trace_.steps.push_back(std::move(s));
  }

  Trace finish() {
    trace_.reason = Termination::Stable;
    trace_.terminal = std::move(x_);
    return std::move(trace_);
  }

 private:
  const Instance& inst_;
  const SolveOptions& options_;
  Allocation x_;
  Trace trace_;
  std::uint64_t budget_ = 0;
  bool in_phase_two_ = false;
};

StepKind best_step_kind(BestKind k) {
  switch (k) {
    case BestKind::TypeIa: return StepKind::BestIa;
    case BestKind::TypeIb: return StepKind::BestIb;
    case BestKind::TypeII: return StepKind::BestII;
  }
  return StepKind::Best;
}

}  // namespace

Trace two_phase_better(const Instance& inst, const Allocation& x0, const SolveOptions& options) {
  Driver driver(inst, x0, options, "two-better");
  while (true) {
    if (auto e = first_type_one_edge(inst, driver.x())) {
      driver.step([&](Allocation& x) { return improvement_one(inst, x, *e); });
    } else if (auto e2 = first_blocking_edge(inst, driver.x())) {
      driver.step([&](Allocation& x) { return improvement_two(inst, x, *e2); });
    } else {
      break;
    }
  }
  return driver.finish();
}

Trace two_phase_best(const Instance& inst, const Allocation& x0, const SolveOptions& options) {
  Driver driver(inst, x0, options, "two-best");
  while (true) {
    std::optional<BestBlocking> phase_one;
    std::optional<BestBlocking> phase_two;
    for (std::size_t j = 0; j < inst.num_jobs() && !phase_one; ++j) {
      const auto c = classify_best_response(inst, driver.x(), j);
      if (!c) continue;
      if (c->kind == BestKind::TypeII) {
        if (!phase_two) phase_two = c;
      } else {
        phase_one = c;
      }
    }
    const auto chosen = phase_one ? phase_one : phase_two;
    if (!chosen) break;
    driver.step([&](Allocation& x) {
      Step s = apply_response(inst, x, chosen->edge, best_step_kind(chosen->kind));
      s.phase = chosen->kind == BestKind::TypeII ? 2 : 1;
      return s;
    });
  }
  return driver.finish();
}

}  // namespace stalloc
