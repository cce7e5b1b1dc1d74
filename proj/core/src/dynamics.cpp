#include "stalloc/dynamics.hpp"

#include <unordered_set>

#include "stalloc/blocking.hpp"

namespace stalloc {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Better: return "better";
    case StepKind::Best: return "best";
    case StepKind::ImprovementI: return "improve1";
    case StepKind::ImprovementII: return "improve2";
    case StepKind::BestIa: return "best1a";
    case StepKind::BestIb: return "best1b";
    case StepKind::BestII: return "best2";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Stable: return "stable";
    case Termination::BudgetExhausted: return "budget_exhausted";
    case Termination::CycleDetected: return "cycle_detected";
    case Termination::ScriptEnd: return "script_end";
  }
  return "?";
}

std::string_view to_string(DynamicsKind k) { return k == DynamicsKind::Better ? "better" : "best"; }

Rational response_amount(const Instance& inst, const Allocation& x, EdgeId e) {
  const Vertex j = inst.job_of(e);
  const Vertex m = inst.machine_of(e);
  const Rational at_job = residual(inst, x, j) + dominated_value(inst, x, e, j);
  const Rational at_machine = residual(inst, x, m) + dominated_value(inst, x, e, m);
  return min(min(at_job, residual(inst, x, e)), at_machine);
}

namespace {

void refuse_excess(const Instance& inst, Allocation& x, EdgeId chosen, Vertex v,
                   std::vector<Refusal>& out) {
  Rational excess = x.allocated(v) - inst.quota(v);
  if (!excess.is_positive()) return;
  const auto adj = inst.incident(v);
  for (auto it = adj.rbegin(); it != adj.rend() && *it != chosen; ++it) {
    if (!x[*it].is_positive()) continue;
    Rational d = min(x[*it], excess);
    x.adjust(inst, *it, -d);
    excess -= d;
    out.push_back({*it, std::move(d)});
    if (excess.is_zero()) return;
  }
}

}  // namespace

Step apply_response(const Instance& inst, Allocation& x, EdgeId e, StepKind kind) {
  Step step;
  step.job = inst.edge(e).job;
  step.edge = e;
  step.kind = kind;
  step.amount = response_amount(inst, x, e);
  x.adjust(inst, e, step.amount);
  refuse_excess(inst, x, e, inst.job_of(e), step.refusals);
  refuse_excess(inst, x, e, inst.machine_of(e), step.refusals);
  return step;
}

std::pair<Allocation, Step> best_response_step(const Instance& inst, const Allocation& x,
                                               std::size_t job) {
  const auto best = best_blocking_edge(inst, x, job);
  if (!best) throw NoBlockingEdge("job " + inst.name(Vertex::job(job)) + " has no blocking edge");
  Allocation next = x;
  Step step = apply_response(inst, next, *best, StepKind::Best);
  return {std::move(next), std::move(step)};
}

std::pair<Allocation, Step> better_response_step(const Instance& inst, const Allocation& x,
                                                 std::size_t job, EdgeId edge) {
  if (inst.edge(edge).job != job || !blocks(inst, x, edge)) {
    throw NoBlockingEdge("edge " + inst.edge_name(edge) + " does not block the allocation");
  }
  Allocation next = x;
  Step step = apply_response(inst, next, edge, StepKind::Better);
  return {std::move(next), std::move(step)};
}

void apply_step(const Instance& inst, Allocation& x, const Step& step) {
  x.adjust(inst, step.edge, step.amount);
  for (const auto& r : step.refusals) x.adjust(inst, r.edge, -r.amount);
}

Allocation replay(const Instance& inst, const Trace& trace) {
  Allocation x = trace.initial;
  for (const auto& s : trace.steps) apply_step(inst, x, s);
  return x;
}

std::vector<std::string> check_better_response(const Instance& inst, const Allocation& before,
                                               const Step& step) {
  std::vector<std::string> problems;
  const std::string name = inst.edge_name(step.edge);
  if (inst.edge(step.edge).job != step.job) problems.push_back(name + " is not incident to the acting job");
  if (!blocks(inst, before, step.edge)) problems.push_back(name + " does not block");
  if (!step.amount.is_positive()) problems.push_back("non-positive amount on " + name);
  const Vertex j = inst.job_of(step.edge);
  const Vertex m = inst.machine_of(step.edge);
  for (const auto& r : step.refusals) {
    if (!r.amount.is_positive()) problems.push_back("non-positive refusal on " + inst.edge_name(r.edge));
    Vertex at = inst.incident_to(r.edge, j) ? j : m;
    if (!inst.incident_to(r.edge, at)) {
      problems.push_back("refusal on " + inst.edge_name(r.edge) + " away from the step's endpoints");
    } else if (inst.rank(at, r.edge) <= inst.rank(at, step.edge)) {
      problems.push_back("refused edge " + inst.edge_name(r.edge) + " is not dominated by " + name);
    }
  }
  Allocation after = before;
  apply_step(inst, after, step);
  for (auto& p : check_feasible(inst, after)) problems.push_back("after step: " + p);
  return problems;
}

std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("draw_below(0)");
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  for (;;) {
    const std::uint64_t v = gen();
    if (v < limit) return v % n;
  }
}

namespace {

class StateMemory {
 public:
  StateMemory(bool enabled, std::size_t cap) : enabled_(enabled), cap_(cap) {}

  /// True if `x` was seen before.
  bool visit(const Allocation& x) {
    if (!enabled_) return false;
    std::string key = x.encode();
    if (seen_.contains(key)) return true;
    if (seen_.size() < cap_) seen_.insert(std::move(key));
    return false;
  }

 private:
  bool enabled_;
  std::size_t cap_;
  std::unordered_set<std::string> seen_;
};

}  // namespace

Trace run_random(const Instance& inst, const Allocation& x0, const RandomPolicy& policy) {
  if (policy.budget == 0) throw std::invalid_argument("random policy budget must be positive");
  Trace trace;
  trace.initial = x0;
  trace.policy = policy;
  trace.algorithm = std::string("random-") + std::string(to_string(policy.kind));
  std::mt19937_64 gen(policy.seed);
  StateMemory memory(policy.cycle_detection, policy.state_cap);
  Allocation x = x0;
  memory.visit(x);
  trace.reason = Termination::BudgetExhausted;
  while (true) {
    const BlockingReport report = blocking_edges(inst, x);
    if (report.empty()) {
      trace.reason = Termination::Stable;
      break;
    }
    if (trace.step_count >= policy.budget) break;
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
      if (report.best_per_job[j]) active.push_back(j);
    }
    const std::size_t job = active[draw_below(gen, active.size())];
    EdgeId edge = *report.best_per_job[job];
    StepKind kind = StepKind::Best;
    if (policy.kind == DynamicsKind::Better) {
      std::vector<EdgeId> options;
      for (const auto& b : report.edges) {
        if (inst.edge(b.edge).job == job) options.push_back(b.edge);
      }
      edge = options[draw_below(gen, options.size())];
      kind = StepKind::Better;
    }
    Step step = apply_response(inst, x, edge, kind);
    ++trace.step_count;
    if (policy.record_steps) trace.steps.push_back(std::move(step));
    if (memory.visit(x)) {
      trace.reason = Termination::CycleDetected;
      break;
    }
  }
  trace.terminal = std::move(x);
  return trace;
}

Trace replay_script(const Instance& inst, const Allocation& x0,
                    std::span<const ScriptedChoice> script, bool require_best) {
  Trace trace;
  trace.initial = x0;
  trace.algorithm = "script";
  Allocation x = x0;
  std::unordered_set<std::string> seen{x.encode()};
  bool repeated = false;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& choice = script[i];
    if (choice.edge >= inst.num_edges() || inst.edge(choice.edge).job != choice.job ||
        !blocks(inst, x, choice.edge)) {
      throw ScriptError(i, "scripted choice " + std::to_string(i) + " does not block");
    }
    if (require_best && best_blocking_edge(inst, x, choice.job) != choice.edge) {
      throw ScriptError(i, "scripted choice " + std::to_string(i) + " is not the job's best blocking edge");
    }
    trace.steps.push_back(apply_response(inst, x, choice.edge,
                                         require_best ? StepKind::Best : StepKind::Better));
    ++trace.step_count;
    if (!seen.insert(x.encode()).second) repeated = true;
  }
  if (repeated) {
    trace.reason = Termination::CycleDetected;
  } else if (blocking_edges(inst, x).empty()) {
    trace.reason = Termination::Stable;
  } else {
    trace.reason = Termination::ScriptEnd;
  }
  trace.terminal = std::move(x);
  return trace;
}

}  // namespace stalloc
