#include "stalloc/allocation.hpp"

#include <stdexcept>

namespace stalloc {

Allocation::Allocation(const Instance& inst)
    : values_(inst.num_edges()),
      job_total_(inst.num_jobs()),
      machine_total_(inst.num_machines()) {}

void Allocation::set(const Instance& inst, EdgeId e, const Rational& value) {
  adjust(inst, e, value - values_[e]);
}

void Allocation::adjust(const Instance& inst, EdgeId e, const Rational& delta) {
  const Edge& edge = inst.edge(e);
  values_[e] += delta;
  job_total_[edge.job] += delta;
  machine_total_[edge.machine] += delta;
}

std::string Allocation::encode() const {
  std::string out;
  for (const auto& v : values_) {
    out += v.str();
    out += ';';
  }
  return out;
}

std::optional<EdgeId> worst_allocated_edge(const Instance& inst, const Allocation& x, Vertex v) {
  const auto adj = inst.incident(v);
  for (auto it = adj.rbegin(); it != adj.rend(); ++it) {
    if (x[*it].is_positive()) return *it;
  }
  return std::nullopt;
}

Rational dominated_value(const Instance& inst, const Allocation& x, EdgeId e, Vertex v) {
  Rational sum;
  const int r = inst.rank(v, e);
  for (EdgeId f : inst.incident(v)) {
    if (inst.rank(v, f) > r) sum += x[f];
  }
  return sum;
}

VertexView vertex_view(const Instance& inst, const Allocation& x, Vertex v) {
  const std::size_t count = v.is_job() ? inst.num_jobs() : inst.num_machines();
  if (v.index >= count) throw std::out_of_range("unknown vertex");
  return VertexView{v, x.allocated(v), residual(inst, x, v), worst_allocated_edge(inst, x, v)};
}

std::vector<std::string> check_feasible(const Instance& inst, const Allocation& x) {
  std::vector<std::string> out;
  if (x.size() != inst.num_edges()) {
    out.push_back("allocation has " + std::to_string(x.size()) + " values for " +
                  std::to_string(inst.num_edges()) + " edges");
    return out;
  }
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (x[e].is_negative()) out.push_back("negative value on " + inst.edge_name(e));
    if (x[e] > inst.capacity(e)) out.push_back("capacity exceeded on " + inst.edge_name(e));
  }
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    const auto v = Vertex::job(j);
    if (x.allocated(v) > inst.quota(v)) out.push_back("quota exceeded at " + inst.name(v));
  }
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    const auto v = Vertex::machine(m);
    if (x.allocated(v) > inst.quota(v)) out.push_back("quota exceeded at " + inst.name(v));
  }
  return out;
}

Rational total_value(const Allocation& x) {
  Rational sum;
  for (const auto& v : x.values()) sum += v;
  return sum;
}

Allocation make_allocation(const Instance& inst, const std::vector<Rational>& values) {
  if (values.size() != inst.num_edges()) throw std::invalid_argument("allocation size mismatch");
  Allocation x(inst);
  for (EdgeId e = 0; e < values.size(); ++e) x.set(inst, e, values[e]);
  return x;
}

}  // namespace stalloc
