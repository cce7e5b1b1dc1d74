#include "stalloc/instance.hpp"

#include <algorithm>
#include <numeric>

namespace stalloc {

namespace {

std::uint64_t pair_key(std::size_t job, std::size_t machine) {
  return (static_cast<std::uint64_t>(job) << 32) | static_cast<std::uint64_t>(machine);
}

bool valid_name(const std::string& name) {
  if (name.empty() || name.front() == '#') return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ',' || c == ':' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

std::string join_message(const std::vector<std::string>& violations) {
  std::string msg = "invalid instance";
  for (const auto& v : violations) msg += "\n  " + v;
  return msg;
}

// Ranks over delta(v) must be exactly {1, ..., deg}.
void check_ranks(const std::string& who, const std::vector<int>& ranks,
                 std::vector<std::string>& errors) {
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      errors.push_back("duplicate rank at " + who);
      return;
    }
  }
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i) + 1) {
      errors.push_back("rank gap at " + who);
      return;
    }
  }
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<std::string> violations)
    : std::runtime_error(join_message(violations)), violations_(std::move(violations)) {}

Instance Instance::validate(const RawInstance& raw) {
  std::vector<std::string> errors;
  Instance inst;

  auto add_vertices = [&](const std::vector<RawInstance::Named>& list, Side side,
                          std::vector<std::string>& names, std::vector<Rational>& quotas) {
    for (const auto& v : list) {
      if (!valid_name(v.name)) {
        errors.push_back("invalid vertex name '" + v.name + "'");
        continue;
      }
      if (v.quota.is_negative()) errors.push_back("negative quota at " + v.name);
      Vertex id{side, names.size()};
      if (!inst.by_name_.emplace(v.name, id).second) {
        errors.push_back("duplicate vertex name '" + v.name + "'");
        continue;
      }
      names.push_back(v.name);
      quotas.push_back(v.quota);
    }
  };
  add_vertices(raw.jobs, Side::Job, inst.job_names_, inst.job_quota_);
  add_vertices(raw.machines, Side::Machine, inst.machine_names_, inst.machine_quota_);
  inst.job_adj_.resize(inst.job_names_.size());
  inst.machine_adj_.resize(inst.machine_names_.size());

  for (const auto& re : raw.edges) {
    const std::string label = re.job + "," + re.machine;
    const auto a = inst.find_vertex(re.job);
    const auto b = inst.find_vertex(re.machine);
    if (!a || !b) {
      errors.push_back("edge " + label + ": unknown vertex '" + (!a ? re.job : re.machine) + "'");
      continue;
    }
    if (a->side == b->side) {
      errors.push_back("non-bipartite edge " + label);
      continue;
    }
    if (!a->is_job()) {
      errors.push_back("edge " + label + ": first endpoint must be a job");
      continue;
    }
    if (re.capacity.is_negative()) errors.push_back("negative capacity on " + label);
    if (!inst.edge_index_.emplace(pair_key(a->index, b->index), inst.edges_.size()).second) {
      errors.push_back("duplicate edge " + label);
      continue;
    }
    const EdgeId id = inst.edges_.size();
    inst.edges_.push_back(Edge{a->index, b->index, re.capacity, re.rank_at_job, re.rank_at_machine});
    inst.job_adj_[a->index].push_back(id);
    inst.machine_adj_[b->index].push_back(id);
  }

  auto check_side = [&](Side side, std::vector<std::vector<EdgeId>>& adj) {
    for (std::size_t i = 0; i < adj.size(); ++i) {
      const Vertex v{side, i};
      std::vector<int> ranks;
      for (EdgeId e : adj[i]) ranks.push_back(inst.rank(v, e));
      check_ranks(inst.name(v), ranks, errors);
      std::sort(adj[i].begin(), adj[i].end(),
                [&](EdgeId x, EdgeId y) { return inst.rank(v, x) < inst.rank(v, y); });
    }
  };
  check_side(Side::Job, inst.job_adj_);
  check_side(Side::Machine, inst.machine_adj_);

  if (!errors.empty()) throw InvalidInstance(std::move(errors));
  return inst;
}

std::string Instance::edge_name(EdgeId e) const {
  return job_names_[edges_[e].job] + "," + machine_names_[edges_[e].machine];
}

std::optional<Vertex> Instance::find_vertex(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> Instance::find_edge(std::size_t job, std::size_t machine) const {
  auto it = edge_index_.find(pair_key(job, machine));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

RawInstance Instance::to_raw() const {
  RawInstance raw;
  for (std::size_t i = 0; i < num_jobs(); ++i) raw.jobs.push_back({job_names_[i], job_quota_[i]});
  for (std::size_t i = 0; i < num_machines(); ++i) {
    raw.machines.push_back({machine_names_[i], machine_quota_[i]});
  }
  for (const auto& e : edges_) {
    raw.edges.push_back({job_names_[e.job], machine_names_[e.machine], e.capacity, e.rank_at_job,
                         e.rank_at_machine});
  }
  return raw;
}

Instance Instance::transposed() const {
  RawInstance raw;
  for (std::size_t i = 0; i < num_machines(); ++i) {
    raw.jobs.push_back({machine_names_[i], machine_quota_[i]});
  }
  for (std::size_t i = 0; i < num_jobs(); ++i) raw.machines.push_back({job_names_[i], job_quota_[i]});
  for (const auto& e : edges_) {
    raw.edges.push_back({machine_names_[e.machine], job_names_[e.job], e.capacity, e.rank_at_machine,
                         e.rank_at_job});
  }
  return validate(raw);
}

}  // namespace stalloc
