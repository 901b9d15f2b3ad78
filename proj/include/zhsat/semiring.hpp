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

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace zhsat {

/// Arbitrary-precision natural number. There is no subtraction, so a value
/// can never leave N.
class Natural {
 public:
  Natural() = default;
  Natural(std::uint64_t v) : value_(v) {}  // NOLINT: implicit on purpose

  /// Parses a non-empty string of decimal digits.
  static Natural from_string(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty natural number");
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("not a natural number: " +
                                    std::string(text));
      }
    }
    Natural n;
    n.value_ = boost::multiprecision::cpp_int(std::string(text));
    return n;
  }

  std::string str() const { return value_.str(); }
  bool is_zero() const { return value_.is_zero(); }
  bool is_one() const { return value_ == 1; }

  std::optional<std::uint64_t> to_u64() const {
    if (value_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return value_.convert_to<std::uint64_t>();
  }

  /// If the value is 2^k, returns k.
  std::optional<std::size_t> log2_exact() const {
    if (value_.is_zero()) return std::nullopt;
    std::size_t k = boost::multiprecision::msb(value_);
    if (boost::multiprecision::lsb(value_) != k) return std::nullopt;
    return k;
  }

  Natural& operator+=(const Natural& o) {
    value_ += o.value_;
    return *this;
  }
  Natural& operator*=(const Natural& o) {
    value_ *= o.value_;
    return *this;
  }
  Natural& operator<<=(std::size_t k) {
    value_ <<= k;
    return *this;
  }
  friend Natural operator+(Natural a, const Natural& b) { return a += b; }
  friend Natural operator*(Natural a, const Natural& b) { return a *= b; }
  friend bool operator==(const Natural& a, const Natural& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend std::ostream& operator<<(std::ostream& os, const Natural& n) {
    return os << n.value_;
  }

  const boost::multiprecision::cpp_int& raw() const { return value_; }

 private:
  boost::multiprecision::cpp_int value_;
};

/// Element of the boolean semiring: + is OR, * is AND.
struct Boolean {
  bool value = false;

  constexpr Boolean() = default;
  constexpr explicit Boolean(bool v) : value(v) {}

  friend constexpr Boolean operator+(Boolean a, Boolean b) {
    return Boolean(a.value || b.value);
  }
  friend constexpr Boolean operator*(Boolean a, Boolean b) {
    return Boolean(a.value && b.value);
  }
  friend constexpr bool operator==(Boolean, Boolean) = default;
  friend std::ostream& operator<<(std::ostream& os, Boolean b) {
    return os << (b.value ? 1 : 0);
  }
};

/// Evaluation target. The carrier is chosen per evaluation; diagrams do not
/// carry one.
enum class Carrier : std::uint8_t { Nat, Bool };

inline std::string_view carrier_name(Carrier c) {
  return c == Carrier::Nat ? "nat" : "bool";
}

/// The unique semiring homomorphism N -> B.
inline Boolean project(const Natural& n) { return Boolean(!n.is_zero()); }

inline Natural pow2(std::size_t c) {
  Natural n(1);
  n <<= c;
  return n;
}

struct NatSemiring {
  using value_type = Natural;
  static constexpr Carrier carrier = Carrier::Nat;
  static Natural zero() { return Natural(0); }
  static Natural one() { return Natural(1); }
  static Natural add(const Natural& a, const Natural& b) { return a + b; }
  static Natural mul(const Natural& a, const Natural& b) { return a * b; }
  static Natural embed(const Natural& n) { return n; }
  static bool is_zero(const Natural& n) { return n.is_zero(); }
  static Natural to_natural(const Natural& n) { return n; }
};

struct BoolSemiring {
  using value_type = Boolean;
  static constexpr Carrier carrier = Carrier::Bool;
  static Boolean zero() { return Boolean(false); }
  static Boolean one() { return Boolean(true); }
  static Boolean add(Boolean a, Boolean b) { return a + b; }
  static Boolean mul(Boolean a, Boolean b) { return a * b; }
  static Boolean embed(const Natural& n) { return project(n); }
  static bool is_zero(Boolean b) { return !b.value; }
  static Natural to_natural(Boolean b) { return Natural(b.value ? 1 : 0); }
};

/// Maps a natural number into the given carrier and back, so a value
/// computed over N can be compared with one computed over B.
inline Natural in_carrier(const Natural& n, Carrier c) {
  return c == Carrier::Nat ? n : Natural(n.is_zero() ? 0 : 1);
}

}  // namespace zhsat
