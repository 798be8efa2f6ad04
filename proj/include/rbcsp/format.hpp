// Copyright 2026 The rbcsp Authors
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
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rbcsp/error.hpp"
#include "rbcsp/model.hpp"

// Canonical instance text format:
//
//   RBCSP 1 <n> <d> <k> <t>
//   <v1> ... <vk> : <c1> ... <cq>      (t lines)
//
// Scope indices and tuple codes are strictly ascending, single-space
// separated, no trailing whitespace, every line newline-terminated. Two
// instances are equal iff their serializations are byte-equal.

namespace rbcsp {

inline void write_instance(std::ostream& os, const CspInstance& instance) {
  os << "RBCSP 1 " << instance.n << ' ' << instance.d << ' ' << instance.k
     << ' ' << instance.constraints.size() << '\n';
  for (const Constraint& c : instance.constraints) {
    for (std::size_t i = 0; i < c.scope.size(); ++i) {
      if (i > 0) os << ' ';
      os << c.scope[i];
    }
    os << " :";
    for (TupleCode code : c.incompatible) os << ' ' << code;
    os << '\n';
  }
}

inline std::string to_rbcsp(const CspInstance& instance) {
  std::ostringstream os;
  write_instance(os, instance);
  return os.str();
}

namespace detail {

/// Splits on single spaces. Leading, trailing or doubled spaces produce an
/// empty token, which the integer parser then rejects.
inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(' ', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::uint64_t parse_uint(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                       ": expected unsigned integer, got '" +
                                       std::string(token) + "'");
  }
  return value;
}

[[noreturn]] inline void parse_fail(std::size_t line_no,
                                    const std::string& msg) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace detail

inline CspInstance read_instance(std::istream& is) {
  using detail::parse_fail;
  using detail::parse_uint;

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(is, line)) parse_fail(line_no, "missing header");
  auto header = detail::split_spaces(line);
  if (header.size() != 6 || header[0] != "RBCSP" || header[1] != "1") {
    parse_fail(line_no, "expected 'RBCSP 1 <n> <d> <k> <t>'");
  }
  CspInstance instance;
  const std::uint64_t n = parse_uint(header[2], line_no);
  instance.d = parse_uint(header[3], line_no);
  const std::uint64_t k = parse_uint(header[4], line_no);
  const std::uint64_t t = parse_uint(header[5], line_no);
  if (n > UINT32_MAX || k > UINT32_MAX) parse_fail(line_no, "n or k too large");
  instance.n = static_cast<std::uint32_t>(n);
  instance.k = static_cast<std::uint32_t>(k);
  if (instance.k < 1 || instance.n < instance.k || instance.d < 1) {
    parse_fail(line_no, "require 1 <= k <= n and d >= 1");
  }
  const auto space = checked_tuple_space(instance.d, instance.k);
  if (!space) parse_fail(line_no, "d^k exceeds the tuple-code range");

  instance.constraints.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i) {
    ++line_no;
    if (!std::getline(is, line)) parse_fail(line_no, "missing constraint line");
    auto tokens = detail::split_spaces(line);
    if (tokens.size() < instance.k + 1 || tokens[instance.k] != ":") {
      parse_fail(line_no, "expected " + std::to_string(instance.k) +
                              " scope indices followed by ':'");
    }
    Constraint c;
    c.scope.reserve(instance.k);
    for (std::uint32_t j = 0; j < instance.k; ++j) {
      const std::uint64_t v = parse_uint(tokens[j], line_no);
      if (v >= instance.n) parse_fail(line_no, "variable index out of range");
      if (!c.scope.empty() && c.scope.back() >= v) {
        parse_fail(line_no, "scope not strictly ascending");
      }
      c.scope.push_back(static_cast<Var>(v));
    }
    c.incompatible.reserve(tokens.size() - instance.k - 1);
    for (std::size_t j = instance.k + 1; j < tokens.size(); ++j) {
      const std::uint64_t code = parse_uint(tokens[j], line_no);
      if (code >= *space) parse_fail(line_no, "tuple code out of range");
      if (!c.incompatible.empty() && c.incompatible.back() >= code) {
        parse_fail(line_no, "tuple codes not strictly ascending");
      }
      c.incompatible.push_back(code);
    }
    instance.constraints.push_back(std::move(c));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    parse_fail(line_no + 1, "unexpected content after last constraint");
  }
  return instance;
}

inline CspInstance from_rbcsp(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_instance(is);
}

}  // namespace rbcsp
