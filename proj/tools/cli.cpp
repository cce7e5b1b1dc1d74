#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stalloc/accelerated.hpp"
#include "stalloc/blocking.hpp"
#include "stalloc/dynamics.hpp"
#include "stalloc/generators.hpp"
#include "stalloc/instance_io.hpp"
#include "stalloc/solvers.hpp"
#include "stalloc/trace_io.hpp"

namespace stalloc::cli {

namespace {

// Input problems (unreadable, malformed or invalid files, bad arguments).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input on which the requested operation is not defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Loaded {
  Instance instance;
  Allocation x;
};

Loaded load(const std::string& path) {
  if (!std::ifstream(path)) throw UsageError("cannot open '" + path + "'");
  ParsedInstance parsed = load_instance(path);
  Allocation x = parsed.allocation ? std::move(*parsed.allocation) : Allocation(parsed.instance);
  if (auto problems = check_feasible(parsed.instance, x); !problems.empty()) {
    throw DomainError("infeasible allocation: " + problems.front());
  }
  return {std::move(parsed.instance), std::move(x)};
}

std::size_t job_index(const Instance& inst, const std::string& name) {
  auto v = inst.find_vertex(name);
  if (!v || v->side != Side::Job) throw UsageError("unknown job '" + name + "'");
  return v->index;
}

// Accepts "machine" or "job,machine".
EdgeId edge_index(const Instance& inst, std::size_t job, const std::string& text) {
  std::string machine_name = text;
  if (auto comma = text.find(','); comma != std::string::npos) {
    if (job_index(inst, text.substr(0, comma)) != job) {
      throw UsageError("edge '" + text + "' is not incident to the chosen job");
    }
    machine_name = text.substr(comma + 1);
  }
  auto m = inst.find_vertex(machine_name);
  if (!m || m->side != Side::Machine) throw UsageError("unknown machine '" + machine_name + "'");
  auto e = inst.find_edge(job, m->index);
  if (!e) throw UsageError("no edge " + inst.name(Vertex::job(job)) + "," + machine_name);
  return *e;
}

void write_values(std::ostream& out, const Instance& inst, const Allocation& x) {
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (x[e].is_positive()) out << "value " << inst.edge_name(e) << ' ' << x[e].str() << '\n';
  }
}

void write_refusals(std::ostream& out, const Instance& inst, const std::vector<Refusal>& refusals) {
  if (refusals.empty()) {
    out << '-';
    return;
  }
  for (std::size_t i = 0; i < refusals.size(); ++i) {
    out << (i ? ";" : "") << inst.edge_name(refusals[i].edge) << ':' << refusals[i].amount.str();
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  return file;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  Loaded in = load(path);
  out << "valid jobs=" << in.instance.num_jobs() << " machines=" << in.instance.num_machines()
      << " edges=" << in.instance.num_edges() << " total=" << total_value(in.x).str() << '\n';
  return kExitOk;
}

int cmd_block(const std::string& path, std::ostream& out) {
  Loaded in = load(path);
  const BlockingReport report = blocking_edges(in.instance, in.x);
  if (report.empty()) {
    out << "stable\n";
    return kExitOk;
  }
  for (const auto& b : report.edges) {
    const Edge& edge = in.instance.edge(b.edge);
    out << in.instance.name(Vertex::job(edge.job)) << ' '
        << in.instance.name(Vertex::machine(edge.machine)) << ' ' << to_string(b.kind) << '\n';
  }
  return kExitOk;
}

struct StepArgs {
  std::string file;
  std::string job;
  std::string edge;
  std::string mode = "best";
  std::string output;
};

int cmd_step(const StepArgs& args, std::ostream& out) {
  Loaded in = load(args.file);
  const std::size_t job = job_index(in.instance, args.job);
  std::pair<Allocation, Step> result = [&] {
    if (args.mode == "best") {
      if (!args.edge.empty()) throw UsageError("--edge is only valid with --mode better");
      if (!best_blocking_edge(in.instance, in.x, job)) {
        throw DomainError("job " + args.job + " has no blocking edge");
      }
      return best_response_step(in.instance, in.x, job);
    }
    if (args.edge.empty()) throw UsageError("--mode better requires --edge");
    const EdgeId e = edge_index(in.instance, job, args.edge);
    if (!blocks(in.instance, in.x, e)) {
      throw DomainError("edge " + in.instance.edge_name(e) + " does not block");
    }
    return better_response_step(in.instance, in.x, job, e);
  }();
  const Step& step = result.second;
  out << "step job=" << args.job << " edge=" << in.instance.edge_name(step.edge)
      << " amount=" << step.amount.str() << " kind=" << to_string(step.kind) << " refusals=";
  write_refusals(out, in.instance, step.refusals);
  out << '\n';
  write_values(out, in.instance, result.first);
  if (!args.output.empty()) open_output(args.output) << serialize(in.instance, &result.first);
  return kExitOk;
}

struct SolveArgs {
  std::string file;
  std::string algorithm = "accel";
  std::string trace;
  std::string output;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  Loaded in = load(args.file);
  const Instance& inst = in.instance;
  std::optional<std::ofstream> trace_file;
  if (!args.trace.empty()) trace_file = open_output(args.trace);

  Allocation result(inst);
  out << "algorithm " << args.algorithm << '\n';
  if (args.algorithm == "accel") {
    AcceleratedResult r = accelerated_solve(inst, in.x);
    out << "phase1_rounds " << r.phase1.rounds << '\n'
        << "phase2_rounds " << r.phase2.rounds << '\n'
        << "modifications " << r.modifications() << '\n';
    if (trace_file) {
      *trace_file << "# stalloc-trace 1\nalgorithm accel\n";
      write_rounds(*trace_file, inst, r.phase1.log, 1);
      write_rounds(*trace_file, make_phase_two_instance(inst, r.phase1.x).instance, r.phase2.log, 2);
      *trace_file << "end reason=stable rounds=" << r.phase1.rounds + r.phase2.rounds << '\n';
    }
    result = std::move(r.x);
  } else if (args.algorithm == "correlated") {
    try {
      result = solve_correlated(inst);
    } catch (const NotCorrelated& e) {
      throw DomainError(e.what());
    }
    if (trace_file) {
      Trace trace{in.x, {}, result, Termination::Stable, 0, 0, 0, "correlated", std::nullopt};
      write_trace(*trace_file, inst, trace);
    }
  } else {
    Trace trace;
    try {
      trace = args.algorithm == "two-better" ? two_phase_better(inst, in.x) : two_phase_best(inst, in.x);
    } catch (const BudgetExceeded& e) {
      throw DomainError(e.what());
    }
    out << "steps " << trace.step_count << '\n' << "phase1_steps " << trace.phase1_steps << '\n';
    if (trace_file) write_trace(*trace_file, inst, trace);
    result = std::move(trace.terminal);
  }
  out << "stable " << (is_stable(inst, result) ? "yes" : "no") << '\n';
  write_values(out, inst, result);
  if (!args.output.empty()) open_output(args.output) << serialize(inst, &result);
  return kExitOk;
}

struct RandomArgs {
  std::string file;
  std::string mode = "best";
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  std::size_t trials = 1;
  bool no_cycle_detection = false;
  std::size_t threads = 0;
  std::string trace;
};

int cmd_random(const RandomArgs& args, std::ostream& out) {
  Loaded in = load(args.file);
  if (args.trials == 0) throw UsageError("--trials must be positive");
  if (!args.trace.empty() && args.trials != 1) throw UsageError("--trace requires --trials 1");

  struct Outcome {
    std::uint64_t seed;
    std::uint64_t steps;
    Termination reason;
  };
  std::vector<Outcome> outcomes(args.trials);
  std::optional<Trace> single;
  auto run_trial = [&](std::size_t i) {
    RandomPolicy policy;
    policy.kind = args.mode == "better" ? DynamicsKind::Better : DynamicsKind::Best;
    policy.seed = args.seed + i;
    policy.budget = args.budget;
    policy.cycle_detection = !args.no_cycle_detection;
    policy.record_steps = !args.trace.empty();
    Trace trace = run_random(in.instance, in.x, policy);
    outcomes[i] = {policy.seed, trace.step_count, trace.reason};
    if (policy.record_steps) single = std::move(trace);
  };

  // Trials are independent; results are gathered by index so the output
  // does not depend on scheduling.
  const std::size_t workers =
      std::min(args.trials, args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < args.trials; i = next++) run_trial(i);
      });
    }
  }

  std::size_t counts[4] = {};
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    out << "trial " << i << " seed=" << o.seed << " steps=" << o.steps << " reason=" << to_string(o.reason)
        << '\n';
    ++counts[static_cast<int>(o.reason)];
  }
  out << "summary trials=" << args.trials << " stable=" << counts[0] << " cycle_detected=" << counts[2]
      << " budget_exhausted=" << counts[1] << '\n';
  if (single) {
    auto file = open_output(args.trace);
    write_trace(file, in.instance, *single);
  }
  return kExitOk;
}

struct GenArgs {
  std::string kind;
  GeneratorSpec spec;
  std::string output;
};

int cmd_gen(GenArgs args, std::ostream& out) {
  auto kind = parse_generator_kind(args.kind);
  if (!kind) throw UsageError("unknown generator '" + args.kind + "'");
  args.spec.kind = *kind;
  Generated g = [&] {
    try {
      return generate(args.spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const std::string text = serialize(g.instance, &g.x);
  if (args.output.empty() || args.output == "-") {
    out << text;
  } else {
    open_output(args.output) << text;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable allocation dynamics and solvers"};
  app.name("stalloc");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check an instance file and its allocation");
  validate->add_option("file", file, "Instance file")->required();

  auto* block = app.add_subcommand("block", "List blocking edges with their type");
  block->add_option("file", file, "Instance file")->required();

  StepArgs step_args;
  auto* step = app.add_subcommand("step", "Apply one better or best response step");
  step->add_option("file", step_args.file, "Instance file")->required();
  step->add_option("--job", step_args.job, "Job that moves")->required();
  step->add_option("--edge", step_args.edge, "Blocking edge (machine or job,machine) for better mode");
  step->add_option("--mode", step_args.mode, "Response kind")->check(CLI::IsMember({"better", "best"}));
  step->add_option("-o,--output", step_args.output, "Write the instance with the new allocation");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Compute a stable allocation");
  solve->add_option("file", solve_args.file, "Instance file")->required();
  solve->add_option("--alg", solve_args.algorithm, "Algorithm")
      ->check(CLI::IsMember({"two-better", "two-best", "accel", "correlated"}));
  solve->add_option("--trace", solve_args.trace, "Write the step or round trace");
  solve->add_option("-o,--output", solve_args.output, "Write the instance with the result");

  RandomArgs random_args;
  auto* random = app.add_subcommand("random", "Run seeded random better or best response dynamics");
  random->add_option("file", random_args.file, "Instance file")->required();
  random->add_option("--mode", random_args.mode, "Response kind")->check(CLI::IsMember({"better", "best"}));
  random->add_option("--seed", random_args.seed, "Seed of the first trial");
  random->add_option("--budget", random_args.budget, "Step budget per trial");
  random->add_option("--trials", random_args.trials, "Number of trials, seeded seed+i");
  random->add_option("--threads", random_args.threads, "Worker threads (default: hardware)");
  random->add_flag("--no-cycle-detection", random_args.no_cycle_detection, "Do not remember states");
  random->add_option("--trace", random_args.trace, "Write the step trace (single trial only)");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a named example or random instance");
  gen->add_option("kind", gen_args.kind,
                  "fig1_cycle, fig2_example, fig5_left, fig5_right, exp_best, random_general, "
                  "random_correlated")
      ->required();
  gen->add_option("-n,--n", gen_args.spec.n, "Size parameter N");
  gen->add_option("--jobs", gen_args.spec.jobs, "Number of jobs");
  gen->add_option("--machines", gen_args.spec.machines, "Number of machines");
  gen->add_option("--density", gen_args.spec.density, "Edge probability in (0, 1]");
  gen->add_option("--max-q", gen_args.spec.max_quota, "Largest quota");
  gen->add_option("--max-c", gen_args.spec.max_capacity, "Largest capacity");
  gen->add_option("--seed", gen_args.spec.seed, "Seed");
  gen->add_option("-o,--output", gen_args.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(file, out);
    if (*block) return cmd_block(file, out);
    if (*step) return cmd_step(step_args, out);
    if (*solve) return cmd_solve(solve_args, out);
    if (*random) return cmd_random(random_args, out);
    if (*gen) return cmd_gen(gen_args, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidInstance& e) {
    err << "invalid instance:\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace stalloc::cli
