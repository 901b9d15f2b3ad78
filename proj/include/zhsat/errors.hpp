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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zhsat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// An operation was called on input outside its domain (wrong clause kinds
/// for a strategy, index out of range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A rewrite was asked to fire at a site that does not match its left-hand
/// side. The diagram is left untouched.
class RewriteMismatch : public Error {
 public:
  using Error::Error;
};

/// A size limit was exceeded; carries the offending size and the limit.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, std::size_t size,
                     std::size_t limit)
      : Error(what + " (size " + std::to_string(size) + ", limit " +
              std::to_string(limit) + ")"),
        size_(size),
        limit_(limit) {}
  std::size_t size() const { return size_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t size_;
  std::size_t limit_;
};

}  // namespace zhsat
