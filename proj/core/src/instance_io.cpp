#include "stalloc/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>
#include <vector>

namespace stalloc {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

enum class Section { None, Jobs, Machines, Edges, Allocation };

struct PendingValue {
  std::string job;
  std::string machine;
  Rational value;
  std::size_t line;
  std::size_t column;
};

}  // namespace

ParsedInstance parse_instance(std::string_view text) {
  RawInstance raw;
  std::vector<PendingValue> pending;
  bool has_allocation = false;
  Section section = Section::None;
  std::size_t line_no = 0;

  auto number = [&](const Token& t) {
    try {
      return Rational::parse(t.text);
    } catch (const std::invalid_argument&) {
      throw ParseError(line_no, t.column, "invalid number '" + std::string(t.text) + "'");
    }
  };
  auto integer = [&](const Token& t) {
    int value = 0;
    bool ok = !t.text.empty() && t.text.size() < 10;
    for (char c : t.text) {
      if (c < '0' || c > '9') ok = false;
      else value = value * 10 + (c - '0');
    }
    if (!ok || value < 1) {
      throw ParseError(line_no, t.column, "invalid rank '" + std::string(t.text) + "'");
    }
    return value;
  };
  auto expect = [&](const std::vector<Token>& tokens, std::size_t n, const char* shape) {
    if (tokens.size() != n) {
      throw ParseError(line_no, tokens.front().column,
                       "expected " + std::to_string(n) + " fields (" + shape + "), found " +
                           std::to_string(tokens.size()));
    }
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string_view head = tokens.front().text;
    if (tokens.size() == 1 && (head == "JOBS" || head == "MACHINES" || head == "EDGES" ||
                               head == "ALLOCATION")) {
      if (head == "JOBS") section = Section::Jobs;
      else if (head == "MACHINES") section = Section::Machines;
      else if (head == "EDGES") section = Section::Edges;
      else {
        section = Section::Allocation;
        has_allocation = true;
      }
      continue;
    }
    switch (section) {
      case Section::None:
        throw ParseError(line_no, tokens.front().column, "data outside of a section");
      case Section::Jobs:
      case Section::Machines: {
        expect(tokens, 2, "name quota");
        auto& list = section == Section::Jobs ? raw.jobs : raw.machines;
        list.push_back({std::string(tokens[0].text), number(tokens[1])});
        break;
      }
      case Section::Edges:
        expect(tokens, 5, "job machine capacity rank_at_job rank_at_machine");
        raw.edges.push_back({std::string(tokens[0].text), std::string(tokens[1].text),
                             number(tokens[2]), integer(tokens[3]), integer(tokens[4])});
        break;
      case Section::Allocation:
        expect(tokens, 3, "job machine value");
        pending.push_back({std::string(tokens[0].text), std::string(tokens[1].text),
                           number(tokens[2]), line_no, tokens[0].column});
        break;
    }
  }

  ParsedInstance out{Instance::validate(raw), std::nullopt};
  if (has_allocation) {
    const Instance& inst = out.instance;
    Allocation x(inst);
    std::unordered_set<EdgeId> assigned;
    for (const auto& p : pending) {
      const auto j = inst.find_vertex(p.job);
      const auto m = inst.find_vertex(p.machine);
      std::optional<EdgeId> e;
      if (j && m && j->is_job() && !m->is_job()) e = inst.find_edge(j->index, m->index);
      if (!e) throw ParseError(p.line, p.column, "allocation on unknown edge " + p.job + "," + p.machine);
      if (!assigned.insert(*e).second) {
        throw ParseError(p.line, p.column, "duplicate allocation for " + p.job + "," + p.machine);
      }
      x.set(inst, *e, p.value);
    }
    out.allocation = std::move(x);
  }
  return out;
}

ParsedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string serialize(const Instance& inst, const Allocation* x) {
  std::ostringstream out;
  out << "JOBS\n";
  for (std::size_t j = 0; j < inst.num_jobs(); ++j) {
    const Vertex v = Vertex::job(j);
    out << inst.name(v) << ' ' << inst.quota(v).pretty() << '\n';
  }
  out << "MACHINES\n";
  for (std::size_t m = 0; m < inst.num_machines(); ++m) {
    const Vertex v = Vertex::machine(m);
    out << inst.name(v) << ' ' << inst.quota(v).pretty() << '\n';
  }
  out << "EDGES\n";
  for (const Edge& e : inst.edges()) {
    out << inst.name(Vertex::job(e.job)) << ' ' << inst.name(Vertex::machine(e.machine)) << ' '
        << e.capacity.pretty() << ' ' << e.rank_at_job << ' ' << e.rank_at_machine << '\n';
  }
  if (x) {
    out << "ALLOCATION\n";
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
      if ((*x)[e].is_zero()) continue;
      const Edge& edge = inst.edge(e);
      out << inst.name(Vertex::job(edge.job)) << ' ' << inst.name(Vertex::machine(edge.machine))
          << ' ' << (*x)[e].pretty() << '\n';
    }
  }
  return out.str();
}

}  // namespace stalloc
