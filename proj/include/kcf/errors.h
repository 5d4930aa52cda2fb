/*
 * Copyright 2026 The KCF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KCF_ERRORS_H_
#define KCF_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kcf {

using UserId = std::int32_t;
using ItemId = std::int32_t;

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file missing or unreadable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input line. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied configuration (kernel parameters, fold counts...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller violated a precondition (dimension mismatch, out-of-range value).
class ContractError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// User with no negative items (m_u^- = 0).
class DegenerateUserError : public Error {
 public:
  using Error::Error;
};

// Item with zero ratings where a normalized representation is required.
class UnreachableItemError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace kcf

#endif  // KCF_ERRORS_H_
