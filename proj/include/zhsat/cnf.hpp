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

#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zhsat/diagram.hpp"
#include "zhsat/errors.hpp"

namespace zhsat {

struct Literal {
  std::uint32_t variable = 0;  // 1-based
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal pos(std::uint32_t v) { return {v, false}; }
inline Literal neg(std::uint32_t v) { return {v, true}; }

enum class ClauseKind : std::uint8_t { Or, Xor };

struct Clause {
  ClauseKind kind = ClauseKind::Or;
  std::vector<Literal> literals;

  friend bool operator==(const Clause&, const Clause&) = default;
};

inline Clause or_clause(std::vector<Literal> lits) {
  return {ClauseKind::Or, std::move(lits)};
}
inline Clause xor_clause(std::vector<Literal> lits) {
  return {ClauseKind::Xor, std::move(lits)};
}

/// Conjunction of OR / XOR clauses over variables 1..num_vars. An XOR clause
/// is satisfied when the XOR of its literals is 1.
struct Formula {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  bool all(ClauseKind k) const {
    for (const Clause& c : clauses)
      if (c.kind != k) return false;
    return true;
  }
  bool is_pure_xor() const { return all(ClauseKind::Xor); }
  bool is_pure_or() const { return all(ClauseKind::Or); }
  std::size_t max_clause_size() const {
    std::size_t k = 0;
    for (const Clause& c : clauses) k = std::max(k, c.literals.size());
    return k;
  }
  std::size_t literal_count() const {
    std::size_t k = 0;
    for (const Clause& c : clauses) k += c.literals.size();
    return k;
  }

  /// Throws PreconditionError on a literal outside 1..num_vars.
  void check() const {
    for (const Clause& c : clauses)
      for (const Literal& l : c.literals)
        if (l.variable == 0 || l.variable > num_vars)
          throw PreconditionError("literal references variable " +
                                  std::to_string(l.variable) + " outside 1.." +
                                  std::to_string(num_vars));
  }

  friend bool operator==(const Formula&, const Formula&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_int(std::string_view tok, long long& out) {
  if (!tok.empty() && tok[0] == '+') tok.remove_prefix(1);
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

}  // namespace detail

/// Parses DIMACS CNF. Lines starting with `c` are comments; a line starting
/// with `x` holds an XOR clause (`x1 -2 0` and `x 1 -2 0` both work; a
/// negated literal flips the clause parity). OR clauses may span lines. A
/// line holding only `%` ends the input, as in the SATLIB benchmark files.
inline Formula parse_dimacs(std::istream& in) {
  Formula f;
  bool have_header = false;
  std::size_t expected = 0;
  std::string line;
  std::size_t lineno = 0;
  Clause pending;
  std::size_t pending_line = 0;
  bool in_clause = false;

  auto add_literal = [&](long long v, std::size_t at) {
    if (v < 0 ? -v > static_cast<long long>(f.num_vars)
              : v > static_cast<long long>(f.num_vars)) {
      throw ParseError(at, "variable index " + std::to_string(v < 0 ? -v : v) +
                               " out of range 1.." + std::to_string(f.num_vars));
    }
    pending.literals.push_back(
        Literal{static_cast<std::uint32_t>(v < 0 ? -v : v), v < 0});
  };
  auto finish_clause = [&](std::size_t at) {
    if (pending.literals.empty()) throw ParseError(at, "empty clause");
    f.clauses.push_back(std::move(pending));
    pending = Clause{};
    in_clause = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    auto toks = detail::split_ws(sv);
    if (toks.empty()) continue;
    if (toks[0][0] == 'c') continue;
    if (toks[0] == "%") break;
    if (toks[0][0] == 'p') {
      if (have_header) throw ParseError(lineno, "duplicate problem line");
      if (in_clause) throw ParseError(lineno, "problem line inside a clause");
      long long n = 0, m = 0;
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf" ||
          !detail::parse_int(toks[2], n) || !detail::parse_int(toks[3], m) ||
          n < 0 || m < 0 || n > 0xffffffffLL) {
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      f.num_vars = static_cast<std::uint32_t>(n);
      expected = static_cast<std::size_t>(m);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause before problem line");

    std::size_t start = 0;
    if (toks[0][0] == 'x') {
      if (in_clause) throw ParseError(lineno, "XOR line inside an unterminated clause");
      pending.kind = ClauseKind::Xor;
      pending_line = lineno;
      in_clause = true;
      if (toks[0].size() == 1) {
        start = 1;
      } else {
        toks[0].remove_prefix(1);
      }
      bool terminated = false;
      for (std::size_t i = start; i < toks.size(); ++i) {
        long long v = 0;
        if (!detail::parse_int(toks[i], v))
          throw ParseError(lineno, "bad literal '" + std::string(toks[i]) + "'");
        if (terminated) throw ParseError(lineno, "literals after terminating 0");
        if (v == 0) {
          finish_clause(lineno);
          terminated = true;
        } else {
          add_literal(v, lineno);
        }
      }
      if (!terminated) throw ParseError(lineno, "missing terminating 0 on XOR clause");
      continue;
    }

    for (auto tok : toks) {
      long long v = 0;
      if (!detail::parse_int(tok, v))
        throw ParseError(lineno, "bad literal '" + std::string(tok) + "'");
      if (!in_clause) {
        pending.kind = ClauseKind::Or;
        pending_line = lineno;
        in_clause = true;
      }
      if (v == 0) {
        finish_clause(lineno);
      } else {
        add_literal(v, lineno);
      }
    }
  }
  if (in_clause) throw ParseError(pending_line, "missing terminating 0");
  if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "missing problem line");
  if (f.clauses.size() != expected) {
    throw ParseError(lineno == 0 ? 1 : lineno,
                     "header declares " + std::to_string(expected) +
                         " clauses, found " + std::to_string(f.clauses.size()));
  }
  return f;
}

inline Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline std::string render_dimacs(const Formula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    if (c.kind == ClauseKind::Xor) out << "x ";
    for (const Literal& l : c.literals)
      out << (l.negated ? "-" : "") << l.variable << ' ';
    out << "0\n";
  }
  return out.str();
}

/// Node ids of an encoded formula: variable j (1-based) is node j-1, clause
/// i is node num_vars + i.
inline NodeId variable_node(std::uint32_t variable) { return variable - 1; }
inline NodeId clause_node(const Formula& f, std::size_t clause) {
  return static_cast<NodeId>(f.num_vars + clause);
}

/// Closed diagram whose value over N is the model count of `f`.
///
/// Each variable is a Z-spider with one leg per occurrence (an unused one is
/// an arity-0 spider, weight 2). An OR clause is an H(0) box reached through
/// a NOT on every leg, except that a negated literal cancels its NOT. An XOR
/// clause is an X-spider on plain legs; its literal negations are absorbed
/// into the parity 1 XOR (number of negated literals mod 2).
inline Diagram encode(const Formula& f) {
  f.check();
  Diagram d;
  for (std::uint32_t v = 1; v <= f.num_vars; ++v) d.add_node(NodeKind::z());
  for (const Clause& c : f.clauses) {
    if (c.kind == ClauseKind::Or) {
      NodeId box = d.add_node(NodeKind::h(Natural(0)));
      for (const Literal& l : c.literals)
        d.add_edge(variable_node(l.variable), box, !l.negated);
    } else {
      bool parity = true;
      for (const Literal& l : c.literals) parity = parity != l.negated;
      NodeId x = d.add_node(NodeKind::x(parity));
      for (const Literal& l : c.literals) d.add_edge(variable_node(l.variable), x, false);
    }
  }
  return d;
}

}  // namespace zhsat
