// Copyright 2026 The zhsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line frontend, kept in a header so tests can drive it in-process.
//
//   zhsat count        [options] [FILE...]   exact model count
//   zhsat decide       [options] [FILE...]   SAT / UNSAT
//   zhsat simplify     [options] [FILE...]   rewrite to a scalar
//   zhsat verify-rules [--seed S] [--trials T] [--rule NAME]
//
// Exit status: 0 success, 1 input or routing error (or a failed rule
// check), 2 resource limit.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "zhsat/zhsat.hpp"

namespace zhsat::cli {

enum class Command { Count, Decide, Simplify, VerifyRules };
enum class Strategy { Auto, Xor, TwoSat, General, Brute };

enum Exit : int { kOk = 0, kInputError = 1, kResourceLimit = 2 };

struct Config {
  Command command = Command::Count;
  std::vector<std::string> inputs;
  Strategy strategy = Strategy::Auto;
  Carrier semiring = Carrier::Nat;
  std::size_t max_box_arity = 16;
  std::size_t max_box_count = StrategyOptions{}.max_box_count;
  std::size_t wire_limit = kDefaultWireLimit;
  bool wire_limit_set = false;
  bool no_fallback = false;
  bool trace = false;
  bool dump_diagram = false;
  bool report = false;
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  std::size_t trials = 500;
  std::string rule;
};

struct Outcome {
  int status = kOk;
  std::string out;
  std::string err;
};

inline Json report_json(const StrategyReport& r) {
  return Json{{"strategy", r.strategy},
              {"carrier", r.carrier == Carrier::Nat ? "nat" : "bool"},
              {"answer", r.answer.str()},
              {"steps", r.step_count},
              {"peak_box_count", r.peak_box_count},
              {"peak_box_arity", r.peak_box_arity},
              {"eliminations", r.eliminations},
              {"fallback_used", r.fallback_used},
              {"stop_reason", r.stop_reason},
              {"residual_wires", r.residual_wires}};
}

/// Runs the chosen strategy. Routing errors are PreconditionErrors.
inline StrategyReport solve(const Formula& f, Mode mode, Strategy s, const StrategyOptions& o) {
  f.check();
  auto as_mode = [mode](StrategyReport r) {
    return mode == Mode::Decide ? project_report(std::move(r)) : r;
  };
  switch (s) {
    case Strategy::Auto: return solve_auto(f, mode, o);
    case Strategy::Xor:
      if (!f.is_pure_xor()) throw PreconditionError("strategy xor needs XOR clauses only");
      return as_mode(count_xorsat(f, o));
    case Strategy::TwoSat:
      if (mode == Mode::Count)
        throw PreconditionError("strategy twosat decides; it cannot count (use general)");
      if (!f.is_pure_or() || f.max_clause_size() > 2)
        throw PreconditionError("strategy twosat needs OR clauses of at most two literals");
      return decide_2sat(f, o);
    case Strategy::General:
      if (f.is_pure_or()) return mode == Mode::Count ? count_sharpsat(f, o) : decide_sat(f, o);
      return as_mode(count_mixed(f, o));
    case Strategy::Brute: return solve_brute(f, mode, o);
  }
  return {};
}

inline std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open '" + path + "'");
    ss << in.rdbuf();
  }
  return ss.str();
}

inline Outcome run_one(const Config& c, const std::string& text) {
  Outcome r;
  std::ostringstream out;
  try {
    Formula f = parse_dimacs(std::string_view(text));
    f.check();
    if (c.dump_diagram) out << to_json(encode(f)).dump() << '\n';
    StrategyOptions o;
    o.max_box_arity = c.max_box_arity;
    o.max_box_count = c.max_box_count;
    o.wire_limit = c.wire_limit;
    o.allow_fallback = !c.no_fallback;
    o.record_trace = c.trace;
    Mode mode = Mode::Count;
    if (c.command == Command::Decide) mode = Mode::Decide;
    if (c.command == Command::Simplify) {
      mode = c.semiring == Carrier::Nat ? Mode::Count : Mode::Decide;
      if (mode == Mode::Count && c.strategy == Strategy::TwoSat)
        throw PreconditionError("strategy twosat uses Bool-only rules; pass --semiring bool");
    }
    StrategyReport rep = solve(f, mode, c.strategy, o);
    if (c.trace)
      for (const RewriteStep& s : rep.steps) out << to_json(s).dump() << '\n';
    switch (c.command) {
      case Command::Decide: out << (rep.answer.is_zero() ? "UNSAT" : "SAT") << '\n'; break;
      default: out << rep.answer.str() << '\n'; break;
    }
    if (c.report) out << report_json(rep).dump() << '\n';
  } catch (const ResourceLimitError& e) {
    r.status = kResourceLimit;
    r.err = std::string("error: ") + e.what() + '\n';
  } catch (const Error& e) {
    r.status = kInputError;
    r.err = std::string("error: ") + e.what() + '\n';
  }
  r.out = out.str();
  return r;
}

/// Runs `count` with `n` workers, each grabbing the next item.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  for (std::thread& t : pool) t.join();
}

/// Results are written in input order, so output does not depend on --jobs.
inline int run_inputs(const Config& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> inputs = c.inputs.empty() ? std::vector<std::string>{"-"} : c.inputs;
  std::vector<Outcome> results(inputs.size());
  std::vector<std::string> texts(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    try {
      texts[i] = read_input(inputs[i]);
    } catch (const Error& e) {
      results[i] = Outcome{kInputError, "", std::string("error: ") + e.what() + '\n'};
    }
  }
  parallel_for(inputs.size(), c.jobs, [&](std::size_t i) {
    if (results[i].err.empty()) results[i] = run_one(c, texts[i]);
  });
  int status = kOk;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs.size() > 1) out << "c " << inputs[i] << '\n';
    out << results[i].out;
    if (!results[i].err.empty()) {
      err << (inputs.size() > 1 ? inputs[i] + ": " : std::string()) << results[i].err;
    }
    status = std::max(status, results[i].status);
  }
  out.flush();
  return status;
}

inline int run_verify(const Config& c, std::ostream& out, std::ostream& err) {
  std::vector<RuleId> rules;
  if (!c.rule.empty()) {
    auto r = rule_from_name(c.rule);
    if (!r) {
      err << "error: unknown rule '" << c.rule << "'\n";
      return kInputError;
    }
    rules.push_back(*r);
  } else {
    for (const RuleInfo& info : kRules) rules.push_back(info.id);
  }
  const std::size_t wires = c.wire_limit_set ? c.wire_limit : 12;
  std::vector<VerifyReport> reps(rules.size());
  parallel_for(rules.size(), c.jobs, [&](std::size_t i) {
    reps[i] = verify_rule(rules[i], c.trials, wires, c.seed);
  });
  bool all = true;
  char head[160];
  std::snprintf(head, sizeof head, "%-22s %-9s %7s %9s %10s  %s\n", "rule", "validity", "trials",
                "nat_fail", "bool_fail", "result");
  out << head;
  for (const VerifyReport& r : reps) {
    std::string name(rule_name(r.rule));
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %-9s %7zu %9zu %10zu  %s\n", name.c_str(),
                  rule_validity(r.rule) == Validity::Nat ? "nat" : "bool", r.trials,
                  r.nat_failures, r.bool_failures, r.passed() ? "PASS" : "FAIL");
    out << line;
    all = all && r.passed();
    for (const Json& ce : r.counterexamples) err << name << " counterexample: " << ce.dump() << '\n';
  }
  out.flush();
  return all ? kOk : kInputError;
}

/// Parses argv and runs. Output goes to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model counting and SAT by ZH-diagram rewriting", "zhsat"};
  app.require_subcommand(1);
  Config c;

  const std::map<std::string, Strategy> strategies{{"auto", Strategy::Auto},
                                                   {"xor", Strategy::Xor},
                                                   {"twosat", Strategy::TwoSat},
                                                   {"general", Strategy::General},
                                                   {"brute", Strategy::Brute}};
  const std::map<std::string, Carrier> semirings{{"nat", Carrier::Nat}, {"bool", Carrier::Bool}};

  auto solving = [&](CLI::App* s) {
    s->add_option("inputs", c.inputs, "DIMACS files ('-' or none for stdin)");
    s->add_option("--strategy", c.strategy, "auto|xor|twosat|general|brute (default auto)")
        ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case).description(""))
        ->type_name("NAME");
    s->add_option("--max-box-arity", c.max_box_arity, "resolvent arity cap (default 16)");
    s->add_option("--max-box-count", c.max_box_count,
                  "H-box budget of the counting strategies, 0 = none");
    s->add_option("--wire-limit", c.wire_limit, "largest residual contracted without fallback")
        ->each([&](const std::string&) { c.wire_limit_set = true; });
    s->add_flag("--no-fallback", c.no_fallback, "fail instead of contracting a large residual");
    s->add_flag("--trace", c.trace, "print every rewrite step as a JSON line");
    s->add_flag("--dump-diagram", c.dump_diagram, "print the encoded diagram as JSON");
    s->add_flag("--report", c.report, "print a JSON line of strategy statistics");
    s->add_option("--jobs", c.jobs, "files solved concurrently")->check(CLI::PositiveNumber);
  };
  CLI::App* count = app.add_subcommand("count", "exact number of models");
  CLI::App* decide = app.add_subcommand("decide", "SAT or UNSAT");
  CLI::App* simplify = app.add_subcommand("simplify", "rewrite the encoding to a scalar");
  CLI::App* verify = app.add_subcommand("verify-rules", "randomized soundness check per rule");
  for (CLI::App* s : {count, decide, simplify}) solving(s);
  simplify
      ->add_option("--semiring", c.semiring, "nat: counting rules only; bool: Bool-only rules too")
      ->transform(CLI::CheckedTransformer(semirings, CLI::ignore_case).description(""))
      ->type_name("nat|bool");
  verify->add_option("--seed", c.seed, "harness seed (default 1)");
  verify->add_option("--trials", c.trials, "planted contexts per rule (default 500)");
  verify->add_option("--wire-limit", c.wire_limit, "wires per planted context (default 12)")
      ->each([&](const std::string&) { c.wire_limit_set = true; });
  verify->add_option("--rule", c.rule, "check a single rule");
  verify->add_option("--jobs", c.jobs, "rules checked concurrently")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface here as well.
    if (e.get_exit_code() == 0) {
      for (CLI::App* s : {count, decide, simplify, verify})
        if (*s) out << s->help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (*verify) return run_verify(c, out, err);
  c.command = *count ? Command::Count : *decide ? Command::Decide : Command::Simplify;
  return run_inputs(c, out, err);
}

}  // namespace zhsat::cli
