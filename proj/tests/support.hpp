#pragma once

// Independent oracles and corpus builders shared by the unit and acceptance
// tests. Oracles recompute everything from raw edge data, without calling
// the library's blocking or residual logic.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/generators.hpp"
#include "stalloc/instance.hpp"

namespace stalloc::testing {

inline Generated fig1() { return generate({.kind = GeneratorKind::Fig1Cycle}); }
inline Generated fig2() { return generate({.kind = GeneratorKind::Fig2Example}); }

inline Generated parametric(GeneratorKind kind, long n) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.n = n;
  return generate(spec);
}

inline EdgeId edge_named(const Instance& inst, const std::string& job, const std::string& machine) {
  return *inst.find_edge(inst.find_vertex(job)->index, inst.find_vertex(machine)->index);
}

inline Rational q(long num, long den = 1) { return Rational(num, den); }

namespace oracle {

inline bool touches(const Instance& inst, EdgeId e, Vertex v) {
  const Edge& edge = inst.edge(e);
  return v.is_job() ? edge.job == v.index : edge.machine == v.index;
}

inline int rank_at(const Instance& inst, EdgeId e, Vertex v) {
  return v.is_job() ? inst.edge(e).rank_at_job : inst.edge(e).rank_at_machine;
}

inline Rational load(const Instance& inst, const Allocation& x, Vertex v) {
  Rational sum;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (touches(inst, e, v)) sum += x[e];
  }
  return sum;
}

inline std::optional<int> worst_rank(const Instance& inst, const Allocation& x, Vertex v) {
  std::optional<int> worst;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (touches(inst, e, v) && x[e].is_positive() && (!worst || rank_at(inst, e, v) > *worst)) {
      worst = rank_at(inst, e, v);
    }
  }
  return worst;
}

/// Blocking definition, condition at one endpoint.
inline bool dominates(const Instance& inst, const Allocation& x, EdgeId e, Vertex v) {
  if (load(inst, x, v) < inst.quota(v)) return true;
  const auto worst = worst_rank(inst, x, v);
  return worst && rank_at(inst, e, v) < *worst;
}

inline bool blocks(const Instance& inst, const Allocation& x, EdgeId e) {
  const Edge& edge = inst.edge(e);
  return x[e] < edge.capacity && dominates(inst, x, e, Vertex::job(edge.job)) &&
         dominates(inst, x, e, Vertex::machine(edge.machine));
}

/// Type I: the job prefers e to its worst positively allocated edge.
inline bool type_one(const Instance& inst, const Allocation& x, EdgeId e) {
  const auto worst = worst_rank(inst, x, Vertex::job(inst.edge(e).job));
  return worst && inst.edge(e).rank_at_job < *worst;
}

inline std::vector<EdgeId> blocking_set(const Instance& inst, const Allocation& x) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (oracle::blocks(inst, x, e)) out.push_back(e);
  }
  return out;
}

inline bool feasible(const Instance& inst, const Allocation& x) {
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (x[e].is_negative() || x[e] > inst.capacity(e)) return false;
  }
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    if (load(inst, x, Vertex::job(j)) > inst.quota(Vertex::job(j))) return false;
  }
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    if (load(inst, x, Vertex::machine(m)) > inst.quota(Vertex::machine(m))) return false;
  }
  return true;
}

/// Every matching (edge subset with pairwise disjoint endpoints), as 0/1
/// edge vectors.
inline std::vector<std::vector<int>> matchings(const Instance& inst) {
  std::vector<std::vector<int>> out;
  const std::size_t n = inst.num_edges();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> job_used(inst.num_jobs()), machine_used(inst.num_machines());
    bool ok = true;
    for (EdgeId e = 0; e < n && ok; ++e) {
      if (!((mask >> e) & 1)) continue;
      ok = !job_used[inst.edge(e).job]++ && !machine_used[inst.edge(e).machine]++;
    }
    if (!ok) continue;
    std::vector<int> bits(n);
    for (EdgeId e = 0; e < n; ++e) bits[e] = static_cast<int>((mask >> e) & 1);
    out.push_back(std::move(bits));
  }
  return out;
}

/// Classical stable-marriage test: no pair in which both sides are
/// unmatched or prefer each other to their partner.
inline bool stable_matching(const Instance& inst, const std::vector<int>& bits) {
  std::vector<std::optional<int>> job_partner_rank(inst.num_jobs()), machine_partner_rank(inst.num_machines());
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (!bits[e]) continue;
    job_partner_rank[inst.edge(e).job] = inst.edge(e).rank_at_job;
    machine_partner_rank[inst.edge(e).machine] = inst.edge(e).rank_at_machine;
  }
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (bits[e]) continue;
    const Edge& edge = inst.edge(e);
    const auto& pj = job_partner_rank[edge.job];
    const auto& pm = machine_partner_rank[edge.machine];
    if ((!pj || edge.rank_at_job < *pj) && (!pm || edge.rank_at_machine < *pm)) return false;
  }
  return true;
}

inline Allocation from_bits(const Instance& inst, const std::vector<int>& bits) {
  Allocation x(inst);
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (bits[e]) x.set(inst, e, Rational(1));
  }
  return x;
}

inline std::set<std::string> stable_matching_keys(const Instance& inst) {
  std::set<std::string> keys;
  for (const auto& bits : matchings(inst)) {
    if (stable_matching(inst, bits)) keys.insert(from_bits(inst, bits).encode());
  }
  return keys;
}

}  // namespace oracle

/// Random instance with unit quotas and capacities and uniformly shuffled
/// preference lists.
inline Instance random_unit_instance(std::uint64_t seed, std::size_t jobs, std::size_t machines,
                                     double density) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(density);
  RawInstance raw;
  for (std::size_t j = 0; j < jobs; ++j) raw.jobs.push_back({"j" + std::to_string(j + 1), Rational(1)});
  for (std::size_t m = 0; m < machines; ++m) {
    raw.machines.push_back({"m" + std::to_string(m + 1), Rational(1)});
  }
  std::vector<std::vector<std::size_t>> at_job(jobs), at_machine(machines);
  for (std::size_t j = 0; j < jobs; ++j) {
    for (std::size_t m = 0; m < machines; ++m) {
      if (!coin(gen)) continue;
      at_job[j].push_back(raw.edges.size());
      at_machine[m].push_back(raw.edges.size());
      raw.edges.push_back({raw.jobs[j].name, raw.machines[m].name, Rational(1), 0, 0});
    }
  }
  for (auto& list : at_job) {
    std::shuffle(list.begin(), list.end(), gen);
    for (std::size_t i = 0; i < list.size(); ++i) raw.edges[list[i]].rank_at_job = static_cast<int>(i) + 1;
  }
  for (auto& list : at_machine) {
    std::shuffle(list.begin(), list.end(), gen);
    for (std::size_t i = 0; i < list.size(); ++i) {
      raw.edges[list[i]].rank_at_machine = static_cast<int>(i) + 1;
    }
  }
  return Instance::validate(raw);
}

/// Random rational instance number `index` of the shared corpus: at most
/// 8 jobs and 8 machines, density between 0.3 and 0.8, quarter-grid data.
inline Generated corpus_instance(std::uint64_t index, GeneratorKind kind = GeneratorKind::RandomGeneral) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.jobs = 1 + index % 8;
  spec.machines = 1 + (index / 8) % 8;
  spec.density = 0.3 + 0.1 * static_cast<double>(index % 6);
  spec.max_quota = 3;
  spec.max_capacity = 2;
  spec.seed = 0x5eed0000 + index;
  return generate(spec);
}

}  // namespace stalloc::testing
