#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stalloc/allocation.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

/// Syntax error in an instance file, with 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParsedInstance {
  Instance instance;
  std::optional<Allocation> allocation;
};

/// Reads the sectioned text format:
///
///   JOBS        lines "name quota"
///   MACHINES    lines "name quota"
///   EDGES       lines "job machine capacity rank_at_job rank_at_machine"
///   ALLOCATION  lines "job machine value"   (optional; missing edges are 0)
///
/// Numbers are integers, decimals or "p/q"; "#" starts a comment. Throws
/// ParseError for syntax problems and InvalidInstance for invariant
/// violations. Feasibility of the allocation is not checked here.
ParsedInstance parse_instance(std::string_view text);

ParsedInstance load_instance(const std::string& path);

/// Inverse of parse_instance; the ALLOCATION section lists positive values.
std::string serialize(const Instance& inst, const Allocation* x = nullptr);

}  // namespace stalloc
