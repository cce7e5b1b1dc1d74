#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "stalloc/accelerated.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/instance.hpp"

namespace stalloc {

/// Line-delimited trace, one record per line, rationals always "p/q":
///
///   # stalloc-trace 1
///   algorithm <name>
///   policy kind=<better|best> seed=<n> budget=<n> cycle_detection=<on|off> generator=mt19937_64
///   step <i> job=<j> edge=<j,m> amount=<p/q> phase=<0|1|2> kind=<k> refusals=<j,m:p/q;...|->
///   end reason=<reason> steps=<n>
///
/// The policy line is present only for random runs.
void write_trace(std::ostream& out, const Instance& inst, const Trace& trace);

///   round <i> phase=<1|2> cycle=<0|1> amount=<p/q> walk=<j,m;...>
///         refusals=<j,m:p/q;...|-> theta1=<a,b,...> theta2=<a,b,...>
///
/// Edge names refer to the instance the phase ran on (phase 2 uses the
/// modified instance with machines as the active side).
void write_rounds(std::ostream& out, const Instance& inst, const std::vector<RoundRecord>& rounds,
                  int phase);


/// Parses the step lines of a trace written by write_trace back into
/// steps on `inst`. Throws std::runtime_error on malformed lines.
std::vector<Step> read_trace_steps(const Instance& inst, std::string_view text);

}  // namespace stalloc
