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

// Classical solvers that share no code with the diagram machinery. They are
// the independent side of every cross-check.

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "zhsat/cnf.hpp"
#include "zhsat/errors.hpp"
#include "zhsat/semiring.hpp"

namespace zhsat {

inline constexpr std::uint32_t kBruteForceVarLimit = 26;

/// Model count by truth-table enumeration.
inline Natural brute_force_count(const Formula& f,
                                 std::uint32_t var_limit = kBruteForceVarLimit) {
  f.check();
  if (f.num_vars > var_limit || f.num_vars > 62) {
    throw ResourceLimitError("too many variables for truth-table enumeration",
                             f.num_vars, var_limit);
  }
  struct Mask {
    ClauseKind kind;
    std::uint64_t pos, neg;  // OR: literal masks. XOR: odd-occurrence vars.
    bool flip;               // XOR: parity of negations
  };
  std::vector<Mask> masks;
  for (const Clause& c : f.clauses) {
    Mask m{c.kind, 0, 0, false};
    for (const Literal& l : c.literals) {
      std::uint64_t bit = std::uint64_t{1} << (l.variable - 1);
      if (c.kind == ClauseKind::Or) {
        (l.negated ? m.neg : m.pos) |= bit;
      } else {
        m.pos ^= bit;
        m.flip = m.flip != l.negated;
      }
    }
    masks.push_back(m);
  }
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t x = 0; x < total; ++x) {
    bool sat = true;
    for (const Mask& m : masks) {
      if (m.kind == ClauseKind::Or) {
        if (((x & m.pos) | (~x & m.neg)) == 0) {
          sat = false;
          break;
        }
      } else {
        bool parity = (std::popcount(x & m.pos) & 1) != 0;
        if ((parity != m.flip) != true) {
          sat = false;
          break;
        }
      }
    }
    if (sat) ++count;
  }
  return Natural(count);
}

/// Model count of a pure XOR formula by Gaussian elimination over GF(2).
inline Natural gauss_count_xor(const Formula& f) {
  f.check();
  if (!f.is_pure_xor()) throw PreconditionError("gauss_count_xor needs XOR clauses only");
  const std::size_t n = f.num_vars;
  const std::size_t words = n / 64 + 1;  // last column bit holds the rhs
  std::vector<std::vector<std::uint64_t>> rows;
  for (const Clause& c : f.clauses) {
    std::vector<std::uint64_t> row(words, 0);
    bool rhs = true;
    for (const Literal& l : c.literals) {
      std::size_t j = l.variable - 1;
      row[j / 64] ^= std::uint64_t{1} << (j % 64);
      rhs = rhs != l.negated;
    }
    if (rhs) row[n / 64] ^= std::uint64_t{1} << (n % 64);
    rows.push_back(std::move(row));
  }
  auto bit = [](const std::vector<std::uint64_t>& r, std::size_t j) {
    return (r[j / 64] >> (j % 64)) & 1;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && !bit(rows[piv], col)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && bit(rows[r], col)) {
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (bit(rows[r], n)) return Natural(0);  // 0 = 1
  return pow2(n - rank);
}

/// 2SAT decision via strongly connected components of the implication graph.
inline Boolean two_sat_oracle(const Formula& f) {
  f.check();
  const std::size_t n = f.num_vars;
  // Literal node: 2*(v-1) for x_v true, 2*(v-1)+1 for x_v false.
  auto lit = [](const Literal& l) {
    return 2 * static_cast<std::size_t>(l.variable - 1) + (l.negated ? 1 : 0);
  };
  std::vector<std::vector<std::size_t>> g(2 * n);
  for (const Clause& c : f.clauses) {
    if (c.kind != ClauseKind::Or) throw PreconditionError("two_sat_oracle needs OR clauses only");
    if (c.literals.size() > 2) throw PreconditionError("two_sat_oracle: clause arity > 2");
    if (c.literals.empty()) return Boolean(false);
    std::size_t a = lit(c.literals[0]);
    std::size_t b = c.literals.size() == 2 ? lit(c.literals[1]) : a;
    g[a ^ 1].push_back(b);
    g[b ^ 1].push_back(a);
  }
  // Iterative Tarjan.
  const std::size_t N = 2 * n;
  const std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(N, kUnset), low(N, 0), comp(N, kUnset);
  std::vector<char> on_stack(N, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t counter = 0, ncomp = 0;
  for (std::size_t s = 0; s < N; ++s) {
    if (index[s] != kUnset) continue;
    call.push_back({s, 0});
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < g[v].size()) {
        std::size_t w = g[v][i++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (comp[2 * v] == comp[2 * v + 1]) return Boolean(false);
  return Boolean(true);
}

}  // namespace zhsat
