#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stalloc/instance.hpp"
#include "stalloc/rational.hpp"

namespace stalloc {

/// An edge function x over a specific instance. Keeps per-vertex totals
/// x(v) in sync with the edge values, so all mutation goes through adjust()
/// or set(), which take the owning instance.
class Allocation {
 public:
  Allocation() = default;
  /// The all-zero allocation on `inst`.
  explicit Allocation(const Instance& inst);

  const Rational& operator[](EdgeId e) const { return values_[e]; }
  const std::vector<Rational>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// x(v): sum of x over the edges incident to v.
  const Rational& allocated(Vertex v) const {
    return v.is_job() ? job_total_[v.index] : machine_total_[v.index];
  }

  void set(const Instance& inst, EdgeId e, const Rational& value);
  void adjust(const Instance& inst, EdgeId e, const Rational& delta);

  /// Canonical textual encoding of every edge value, suitable as a state key.
  std::string encode() const;

  friend bool operator==(const Allocation& a, const Allocation& b) { return a.values_ == b.values_; }

 private:
  std::vector<Rational> values_;
  std::vector<Rational> job_total_;
  std::vector<Rational> machine_total_;
};

/// Residual capacity c(e) - x(e).
inline Rational residual(const Instance& inst, const Allocation& x, EdgeId e) {
  return inst.capacity(e) - x[e];
}
/// Residual quota q(v) - x(v).
inline Rational residual(const Instance& inst, const Allocation& x, Vertex v) {
  return inst.quota(v) - x.allocated(v);
}

/// r(v): the worst-ranked edge of v carrying positive value.
std::optional<EdgeId> worst_allocated_edge(const Instance& inst, const Allocation& x, Vertex v);

/// Sum of x over edges of v that v ranks strictly worse than e.
Rational dominated_value(const Instance& inst, const Allocation& x, EdgeId e, Vertex v);

struct VertexView {
  Vertex vertex;
  Rational allocated;
  Rational residual;
  std::optional<EdgeId> worst_allocated_edge;
};

VertexView vertex_view(const Instance& inst, const Allocation& x, Vertex v);

/// Every violated capacity, quota or nonnegativity condition, as readable
/// messages. Empty means x is a feasible allocation.
std::vector<std::string> check_feasible(const Instance& inst, const Allocation& x);
inline bool is_feasible(const Instance& inst, const Allocation& x) {
  return check_feasible(inst, x).empty();
}

/// |x|: the sum of x over all edges.
Rational total_value(const Allocation& x);

/// Builds an allocation from raw per-edge values (size must match).
Allocation make_allocation(const Instance& inst, const std::vector<Rational>& values);

}  // namespace stalloc
