#include "stalloc/trace_io.hpp"

#include <sstream>
#include <stdexcept>

namespace stalloc {

namespace {

std::string refusal_list(const Instance& inst, const std::vector<Refusal>& refusals) {
  if (refusals.empty()) return "-";
  std::string out;
  for (const auto& r : refusals) {
    if (!out.empty()) out += ';';
    out += inst.edge_name(r.edge) + ":" + r.amount.str();
  }
  return out;
}

std::string int_list(const std::vector<int>& values) {
  std::string out;
  for (int v : values) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

EdgeId edge_by_name(const Instance& inst, std::string_view name) {
  const auto comma = name.find(',');
  if (comma == std::string_view::npos) throw std::runtime_error("malformed edge '" + std::string(name) + "'");
  const auto j = inst.find_vertex(name.substr(0, comma));
  const auto m = inst.find_vertex(name.substr(comma + 1));
  if (j && m && j->is_job() && !m->is_job()) {
    if (auto e = inst.find_edge(j->index, m->index)) return *e;
  }
  throw std::runtime_error("unknown edge '" + std::string(name) + "'");
}

StepKind step_kind(std::string_view s) {
  for (auto k : {StepKind::Better, StepKind::Best, StepKind::ImprovementI, StepKind::ImprovementII,
                 StepKind::BestIa, StepKind::BestIb, StepKind::BestII}) {
    if (to_string(k) == s) return k;
  }
  throw std::runtime_error("unknown step kind '" + std::string(s) + "'");
}

}  // namespace

void write_trace(std::ostream& out, const Instance& inst, const Trace& trace) {
  out << "# stalloc-trace 1\n";
  out << "algorithm " << (trace.algorithm.empty() ? "unknown" : trace.algorithm) << '\n';
  if (trace.policy) {
    const auto& p = *trace.policy;
    out << "policy kind=" << to_string(p.kind) << " seed=" << p.seed << " budget=" << p.budget
        << " cycle_detection=" << (p.cycle_detection ? "on" : "off") << " generator=" << kGeneratorName
        << '\n';
  }
  std::size_t index = 1;
  for (const auto& s : trace.steps) {
    out << "step " << index++ << " job=" << inst.name(Vertex::job(s.job))
        << " edge=" << inst.edge_name(s.edge) << " amount=" << s.amount.str() << " phase=" << s.phase
        << " kind=" << to_string(s.kind) << " refusals=" << refusal_list(inst, s.refusals) << '\n';
  }
  out << "end reason=" << to_string(trace.reason) << " steps=" << trace.step_count << '\n';
}

void write_rounds(std::ostream& out, const Instance& inst, const std::vector<RoundRecord>& rounds,
                  int phase) {
  std::size_t index = 1;
  for (const auto& r : rounds) {
    std::string walk;
    for (EdgeId e : r.walk.edges) {
      if (!walk.empty()) walk += ';';
      walk += inst.edge_name(e);
    }
    out << "round " << index++ << " phase=" << phase << " cycle=" << (r.walk.is_cycle ? 1 : 0)
        << " amount=" << r.amount.str() << " walk=" << walk
        << " refusals=" << refusal_list(inst, r.start_refusals)
        << " theta1=" << int_list(r.potential_after.theta1)
        << " theta2=" << int_list(r.potential_after.theta2) << '\n';
  }
}

std::vector<Step> read_trace_steps(const Instance& inst, std::string_view text) {
  std::vector<Step> steps;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("step ", 0) != 0) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word >> word;  // "step", index
    Step step;
    while (fields >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) throw std::runtime_error("malformed field '" + word + "'");
      const std::string key = word.substr(0, eq);
      const std::string value = word.substr(eq + 1);
      if (key == "edge") {
        step.edge = edge_by_name(inst, value);
        step.job = inst.edge(step.edge).job;
      } else if (key == "amount") {
        step.amount = Rational::parse(value);
      } else if (key == "phase") {
        step.phase = std::stoi(value);
      } else if (key == "kind") {
        step.kind = step_kind(value);
      } else if (key == "refusals" && value != "-") {
        std::size_t start = 0;
        while (start <= value.size()) {
          const std::size_t end = std::min(value.find(';', start), value.size());
          const std::string item = value.substr(start, end - start);
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw std::runtime_error("malformed refusal '" + item + "'");
          step.refusals.push_back({edge_by_name(inst, item.substr(0, colon)),
                                   Rational::parse(item.substr(colon + 1))});
          start = end + 1;
        }
      }
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace stalloc
