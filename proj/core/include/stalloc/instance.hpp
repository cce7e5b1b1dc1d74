#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stalloc/rational.hpp"

namespace stalloc {

using EdgeId = std::size_t;

enum class Side : std::uint8_t { Job, Machine };

/// A vertex of the bipartite graph: a job or a machine, by index in its class.
struct Vertex {
  Side side = Side::Job;
  std::size_t index = 0;

  static Vertex job(std::size_t i) { return {Side::Job, i}; }
  static Vertex machine(std::size_t i) { return {Side::Machine, i}; }

  bool is_job() const { return side == Side::Job; }
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  std::size_t job = 0;
  std::size_t machine = 0;
  Rational capacity;
  int rank_at_job = 0;
  int rank_at_machine = 0;
};

/// Unvalidated instance description, as read from a file or built by a
/// generator. Edges refer to vertices by name.
struct RawInstance {
  struct Named {
    std::string name;
    Rational quota;
  };
  struct RawEdge {
    std::string job;
    std::string machine;
    Rational capacity;
    int rank_at_job = 0;
    int rank_at_machine = 0;
  };
  std::vector<Named> jobs;
  std::vector<Named> machines;
  std::vector<RawEdge> edges;
};

/// Thrown by Instance::validate with every invariant violation found.
class InvalidInstance : public std::runtime_error {
 public:
  explicit InvalidInstance(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A validated stable allocation instance: bipartite graph, quotas, edge
/// capacities and strict, gap-free preference ranks at both endpoints.
/// Immutable once built. Jobs are the active side.
class Instance {
 public:
  Instance() = default;

  static Instance validate(const RawInstance& raw);

  std::size_t num_jobs() const { return job_names_.size(); }
  std::size_t num_machines() const { return machine_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_vertices() const { return num_jobs() + num_machines(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Rational& quota(Vertex v) const {
    return v.is_job() ? job_quota_[v.index] : machine_quota_[v.index];
  }
  const Rational& capacity(EdgeId e) const { return edges_[e].capacity; }

  /// Incident edges of v ordered best-first (rank 1 first).
  std::span<const EdgeId> incident(Vertex v) const {
    return v.is_job() ? std::span<const EdgeId>(job_adj_[v.index])
                      : std::span<const EdgeId>(machine_adj_[v.index]);
  }
  std::size_t degree(Vertex v) const { return incident(v).size(); }

  int rank(Vertex v, EdgeId e) const {
    return v.is_job() ? edges_[e].rank_at_job : edges_[e].rank_at_machine;
  }
  bool incident_to(EdgeId e, Vertex v) const {
    return v.is_job() ? edges_[e].job == v.index : edges_[e].machine == v.index;
  }
  Vertex job_of(EdgeId e) const { return Vertex::job(edges_[e].job); }
  Vertex machine_of(EdgeId e) const { return Vertex::machine(edges_[e].machine); }

  const std::string& name(Vertex v) const {
    return v.is_job() ? job_names_[v.index] : machine_names_[v.index];
  }
  /// "job,machine", the textual edge key used by traces and the CLI.
  std::string edge_name(EdgeId e) const;

  std::optional<Vertex> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::size_t job, std::size_t machine) const;

  RawInstance to_raw() const;

  /// Same graph with the two classes swapped: machines become jobs (the
  /// active side) and jobs become machines. Edge ids are preserved.
  Instance transposed() const;

 private:
  std::vector<std::string> job_names_;
  std::vector<std::string> machine_names_;
  std::vector<Rational> job_quota_;
  std::vector<Rational> machine_quota_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> job_adj_;
  std::vector<std::vector<EdgeId>> machine_adj_;
  std::unordered_map<std::string, Vertex> by_name_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
};

}  // namespace stalloc
