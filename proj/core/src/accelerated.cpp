#include "stalloc/accelerated.hpp"

#include <algorithm>
#include <stdexcept>

#include "stalloc/blocking.hpp"

namespace stalloc {

HelperRole HelperGraph::classify(const Instance& inst, const Allocation& x, EdgeId e) const {
  if (x[e] >= inst.capacity(e)) return HelperRole::None;
  const Vertex j = inst.job_of(e);
  const auto r = refusal_[j.index];
  if (!r || inst.rank(j, e) >= inst.rank(j, *r)) return HelperRole::None;
  const Vertex m = inst.machine_of(e);
  if (dominates_at(inst, x, e, m)) return HelperRole::Blocking;
  if (refusals_at_[m.index] > 0) return HelperRole::PossiblyBlocking;
  return HelperRole::None;
}

void HelperGraph::set_role(const Instance& inst, EdgeId e, HelperRole role) {
  const std::size_t m = inst.edge(e).machine;
  if (roles_[e] == HelperRole::Blocking) {
    --num_blocking_;
    --blocking_at_[m];
  }
  roles_[e] = role;
  if (role == HelperRole::Blocking) {
    ++num_blocking_;
    ++blocking_at_[m];
  }
}

void HelperGraph::refresh_best_proposal(const Instance& inst, std::size_t machine) {
  best_proposal_[machine].reset();
  for (EdgeId e : inst.incident(Vertex::machine(machine))) {
    if (roles_[e] != HelperRole::None) {
      best_proposal_[machine] = e;
      return;
    }
  }
}

HelperGraph HelperGraph::build(const Instance& inst, const Allocation& x) {
  HelperGraph h;
  h.roles_.assign(inst.num_edges(), HelperRole::None);
  h.refusal_.resize(inst.num_jobs());
  h.refusals_at_.assign(inst.num_machines(), 0);
  h.blocking_at_.assign(inst.num_machines(), 0);
  h.best_proposal_.resize(inst.num_machines());
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    h.refusal_[j] = worst_allocated_edge(inst, x, Vertex::job(j));
    if (h.refusal_[j]) ++h.refusals_at_[inst.edge(*h.refusal_[j]).machine];
  }
  for (EdgeId e = 0; e < inst.num_edges(); ++e) h.set_role(inst, e, h.classify(inst, x, e));
  for (std::size_t m = 0; m < inst.num_machines(); ++m) h.refresh_best_proposal(inst, m);
  return h;
}

void HelperGraph::update(const Instance& inst, const Allocation& x, const std::vector<EdgeId>& changed) {
  std::vector<std::size_t> jobs;
  std::vector<std::size_t> machines;
  for (EdgeId e : changed) {
    jobs.push_back(inst.edge(e).job);
    machines.push_back(inst.edge(e).machine);
  }
  std::sort(jobs.begin(), jobs.end());
  jobs.erase(std::unique(jobs.begin(), jobs.end()), jobs.end());

  for (std::size_t j : jobs) {
    const auto next = worst_allocated_edge(inst, x, Vertex::job(j));
    if (next == refusal_[j]) continue;
    if (refusal_[j]) {
      const std::size_t m = inst.edge(*refusal_[j]).machine;
      --refusals_at_[m];
      machines.push_back(m);
    }
    if (next) {
      const std::size_t m = inst.edge(*next).machine;
      ++refusals_at_[m];
      machines.push_back(m);
    }
    refusal_[j] = next;
  }
  std::sort(machines.begin(), machines.end());
  machines.erase(std::unique(machines.begin(), machines.end()), machines.end());

  std::vector<std::size_t> refresh = machines;
  for (std::size_t j : jobs) {
    for (EdgeId e : inst.incident(Vertex::job(j))) {
      set_role(inst, e, classify(inst, x, e));
      refresh.push_back(inst.edge(e).machine);
    }
  }
  for (std::size_t m : machines) {
    for (EdgeId e : inst.incident(Vertex::machine(m))) set_role(inst, e, classify(inst, x, e));
  }
  std::sort(refresh.begin(), refresh.end());
  refresh.erase(std::unique(refresh.begin(), refresh.end()), refresh.end());
  for (std::size_t m : refresh) refresh_best_proposal(inst, m);
}

std::vector<EdgeId> HelperGraph::blocking() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < roles_.size(); ++e) {
    if (roles_[e] == HelperRole::Blocking) out.push_back(e);
  }
  return out;
}

std::vector<EdgeId> HelperGraph::possibly_blocking() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < roles_.size(); ++e) {
    if (roles_[e] == HelperRole::PossiblyBlocking) out.push_back(e);
  }
  return out;
}

std::vector<EdgeId> HelperGraph::refusal_edges() const {
  std::vector<EdgeId> out;
  for (const auto& r : refusal_) {
    if (r) out.push_back(*r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> HelperGraph::proposal_order_violations(const Instance& inst) const {
  std::vector<std::string> out;
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    bool seen_possible = false;
    for (EdgeId e : inst.incident(Vertex::machine(m))) {
      if (roles_[e] == HelperRole::PossiblyBlocking) seen_possible = true;
      if (roles_[e] == HelperRole::Blocking && seen_possible) {
        out.push_back("blocking edge " + inst.edge_name(e) + " ranked below a possibly blocking edge");
      }
    }
  }
  return out;
}

std::vector<EdgeId> AltWalk::proposals() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < edges.size(); i += 2) out.push_back(edges[i]);
  return out;
}

std::vector<EdgeId> AltWalk::refusals() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 1; i < edges.size(); i += 2) out.push_back(edges[i]);
  return out;
}

AltWalk find_walk(const HelperGraph& helper, const Instance& inst, const Allocation& /*x*/) {
  std::optional<std::size_t> start;
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    if (helper.has_blocking_edge(m)) {
      start = m;
      break;
    }
  }
  if (!start) throw std::logic_error("find_walk: no blocking edge of type I");

  AltWalk walk;
  walk.start_machine = *start;
  std::vector<bool> job_seen(inst.num_jobs(), false);
  std::vector<bool> machine_seen(inst.num_machines(), false);
  std::size_t m = *start;
  machine_seen[m] = true;
  while (true) {
    const auto p = helper.best_proposal(m);
    if (!p) break;
    const std::size_t j = inst.edge(*p).job;
    if (job_seen[j]) break;
    const auto r = helper.refusal(j);
    if (!r) throw std::logic_error("proposal edge at a job without refusal pointer");
    job_seen[j] = true;
    walk.edges.push_back(*p);
    walk.edges.push_back(*r);
    m = inst.edge(*r).machine;
    if (machine_seen[m]) break;
    machine_seen[m] = true;
  }
  walk.end_machine = m;
  walk.is_cycle = !walk.edges.empty() && m == walk.start_machine;
  return walk;
}

Augmentation augment(const Instance& inst, Allocation& x, const AltWalk& walk) {
  if (walk.edges.empty()) throw std::logic_error("augment: empty walk");
  Augmentation aug;
  std::optional<Rational> amount;
  auto take = [&](const Rational& v) {
    if (!amount || v < *amount) amount = v;
  };
  for (std::size_t i = 0; i < walk.edges.size(); ++i) {
    const EdgeId e = walk.edges[i];
    take(i % 2 == 0 ? residual(inst, x, e) : x[e]);
  }
  const EdgeId first = walk.edges.front();
  const Vertex start = Vertex::machine(walk.start_machine);
  if (!walk.is_cycle) take(residual(inst, x, start) + dominated_value(inst, x, first, start));
  aug.amount = *amount;

  if (!walk.is_cycle) {
    Rational excess = aug.amount - residual(inst, x, start);
    const auto adj = inst.incident(start);
    for (auto it = adj.rbegin(); it != adj.rend() && *it != first && excess.is_positive(); ++it) {
      if (!x[*it].is_positive()) continue;
      Rational d = min(x[*it], excess);
      x.adjust(inst, *it, -d);
      excess -= d;
      aug.changed.push_back(*it);
      aug.start_refusals.push_back({*it, std::move(d)});
    }
  }
  for (std::size_t i = 0; i < walk.edges.size(); ++i) {
    const EdgeId e = walk.edges[i];
    x.adjust(inst, e, i % 2 == 0 ? aug.amount : -aug.amount);
    aug.changed.push_back(e);
  }
  return aug;
}

PotentialAccel potential_accel(const Instance& inst, const HelperGraph& helper) {
  PotentialAccel p;
  const int absent_job = static_cast<int>(inst.num_machines()) + 1;
  const int absent_machine = -(static_cast<int>(inst.num_jobs()) + 1);
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    const auto r = helper.refusal(j);
    p.theta1.push_back(r ? inst.rank(Vertex::job(j), *r) : absent_job);
  }
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    const auto b = helper.best_proposal(m);
    p.theta2.push_back(b ? -inst.rank(Vertex::machine(m), *b) : absent_machine);
  }
  return p;
}

namespace {

// -1: a < b componentwise (no larger, smaller somewhere); 0: equal; 1 otherwise.
int componentwise(const std::vector<int>& a, const std::vector<int>& b) {
  bool smaller = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return 1;
    if (a[i] < b[i]) smaller = true;
  }
  return smaller ? -1 : 0;
}

}  // namespace

bool strictly_decreased(const PotentialAccel& before, const PotentialAccel& after) {
  const int first = componentwise(after.theta1, before.theta1);
  if (first == -1) return true;
  if (first == 1) return false;
  return componentwise(after.theta2, before.theta2) == -1;
}

PhaseResult accelerated_phase1(const Instance& inst, const Allocation& x0,
                               const AcceleratedOptions& options) {
  const std::uint64_t budget =
      options.round_budget ? options.round_budget
                           : 100 * inst.num_vertices() * inst.num_edges() + 100;
  PhaseResult result;
  result.x = x0;
  HelperGraph helper = HelperGraph::build(inst, result.x);
  while (helper.num_blocking() > 0) {
    if (result.rounds >= budget) {
      throw std::runtime_error("accelerated phase: round budget of " + std::to_string(budget) +
                               " exhausted");
    }
    RoundRecord record;
    record.potential_before = potential_accel(inst, helper);
    record.walk = find_walk(helper, inst, result.x);

    std::optional<Allocation> x_before;
    std::optional<HelperGraph> helper_before;
    if (options.observer) {
      x_before = result.x;
      helper_before = helper;
    }
    Augmentation aug = augment(inst, result.x, record.walk);
    helper.update(inst, result.x, aug.changed);
    if (options.verify_updates && !(helper == HelperGraph::build(inst, result.x))) {
      throw std::logic_error("incremental helper update disagrees with a full rebuild");
    }
    ++result.rounds;
    result.modifications += aug.changed.size();
    record.amount = std::move(aug.amount);
    record.start_refusals = std::move(aug.start_refusals);
    record.potential_after = potential_accel(inst, helper);
    if (options.observer) {
      options.observer(RoundEvent{record, *x_before, result.x, *helper_before, helper});
    }
    if (options.record_rounds) result.log.push_back(std::move(record));
  }
  return result;
}

PhaseTwoInstance make_phase_two_instance(const Instance& inst, const Allocation& x) {
  RawInstance raw;
  Rational largest;
  Rational total;
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    const Vertex v = Vertex::machine(m);
    raw.jobs.push_back({inst.name(v), inst.quota(v)});
    largest = max(largest, inst.quota(v));
    total += inst.quota(v);
  }
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    const Vertex v = Vertex::job(j);
    raw.machines.push_back({inst.name(v), inst.quota(v)});
  }
  std::string dummy = "j_d";
  while (inst.find_vertex(dummy)) dummy += "_";
  raw.machines.push_back({dummy, total});
  for (const Edge& e : inst.edges()) {
    raw.edges.push_back({inst.name(Vertex::machine(e.machine)), inst.name(Vertex::job(e.job)),
                         e.capacity, e.rank_at_machine, e.rank_at_job});
  }
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    const Vertex v = Vertex::machine(m);
    raw.edges.push_back({inst.name(v), dummy, largest, static_cast<int>(inst.degree(v)) + 1,
                         static_cast<int>(m) + 1});
  }
  PhaseTwoInstance out;
  out.instance = Instance::validate(raw);
  out.original_edges = inst.num_edges();
  out.x = Allocation(out.instance);
  for (EdgeId e = 0; e < inst.num_edges(); ++e) out.x.set(out.instance, e, x[e]);
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    out.x.set(out.instance, inst.num_edges() + m, residual(inst, x, Vertex::machine(m)));
  }
  return out;
}

PhaseResult accelerated_phase2(const Instance& inst, const Allocation& x,
                               const AcceleratedOptions& options) {
  const PhaseTwoInstance modified = make_phase_two_instance(inst, x);
  PhaseResult result = accelerated_phase1(modified.instance, modified.x, options);
  Allocation restricted(inst);
  for (EdgeId e = 0; e < inst.num_edges(); ++e) restricted.set(inst, e, result.x[e]);
  result.x = std::move(restricted);
  return result;
}

AcceleratedResult accelerated_solve(const Instance& inst, const Allocation& x0,
                                    const AcceleratedOptions& options) {
  AcceleratedResult out;
  out.phase1 = accelerated_phase1(inst, x0, options);
  out.phase2 = accelerated_phase2(inst, out.phase1.x, options);
  out.x = out.phase2.x;
  return out;
}

}  // namespace stalloc
