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

// Seeded instance generators for tests, the rule harness and benchmarks.
// Bounded draws avoid std::uniform_int_distribution so that a seed gives the
// same instances with every standard library.

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "zhsat/cnf.hpp"
#include "zhsat/contract.hpp"

namespace zhsat {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();  // full 64-bit range
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, n - 1)); }
  bool coin() { return (engine_() >> 63) != 0; }
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return uniform(1, den) <= num; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// k distinct variables, each negated with probability 1/2.
inline std::vector<Literal> random_literals(Rng& rng, std::uint32_t n, std::size_t k) {
  std::vector<std::uint32_t> vars(n);
  for (std::uint32_t i = 0; i < n; ++i) vars[i] = i + 1;
  std::vector<Literal> out;
  for (std::size_t i = 0; i < k && i < n; ++i) {
    std::size_t j = i + rng.index(n - i);
    std::swap(vars[i], vars[j]);
    out.push_back(Literal{vars[i], rng.coin()});
  }
  return out;
}

/// Uniform random k-CNF: m clauses of k distinct variables.
inline Formula random_kcnf(Rng& rng, std::uint32_t n, std::size_t m, std::size_t k) {
  Formula f{n, {}};
  for (std::size_t i = 0; i < m; ++i) f.clauses.push_back(or_clause(random_literals(rng, n, k)));
  return f;
}

/// Random 2-CNF with clause sizes in {1, 2}; about one clause in eight is a
/// unit.
inline Formula random_2sat(Rng& rng, std::uint32_t n, std::size_t m) {
  Formula f{n, {}};
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t k = (n >= 2 && !rng.chance(1, 8)) ? 2 : 1;
    f.clauses.push_back(or_clause(random_literals(rng, n, k)));
  }
  return f;
}

/// Random XOR system with clause lengths in [1, max_len].
inline Formula random_xor(Rng& rng, std::uint32_t n, std::size_t m, std::size_t max_len) {
  Formula f{n, {}};
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t k = static_cast<std::size_t>(rng.uniform(1, max_len));
    f.clauses.push_back(xor_clause(random_literals(rng, n, k)));
  }
  return f;
}

/// Mixed OR/XOR formula. Literals may repeat within a clause so that the
/// duplicate and tautology cases are exercised.
inline Formula random_mixed(Rng& rng, std::uint32_t n, std::size_t m, std::size_t max_len) {
  Formula f{n, {}};
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t k = static_cast<std::size_t>(rng.uniform(1, max_len));
    std::vector<Literal> lits;
    for (std::size_t j = 0; j < k; ++j)
      lits.push_back(Literal{static_cast<std::uint32_t>(rng.uniform(1, n)), rng.coin()});
    f.clauses.push_back(rng.coin() ? or_clause(std::move(lits)) : xor_clause(std::move(lits)));
  }
  return f;
}

/// Tensor of the given arity with entries uniform in [0, max_entry].
inline ValueTensor random_tensor(Rng& rng, std::size_t arity, std::uint64_t max_entry) {
  ValueTensor t(arity);
  for (Natural& c : t.coefficients) c = Natural(rng.uniform(0, max_entry));
  return t;
}

}  // namespace zhsat
