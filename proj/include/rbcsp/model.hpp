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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbcsp/error.hpp"

namespace rbcsp {

using Var = std::uint32_t;
using Value = std::uint32_t;
using TupleCode = std::uint64_t;

/// Largest admissible tuple space d^k. Codes are stored as 64-bit integers;
/// the cap leaves headroom so that `space + 1` never wraps.
inline constexpr TupleCode kMaxTupleSpace = TupleCode{1} << 62;

/// Returns d^k, or nullopt if it exceeds kMaxTupleSpace.
inline std::optional<TupleCode> checked_tuple_space(std::uint64_t d,
                                                    std::uint32_t k) {
  TupleCode space = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (d != 0 && space > kMaxTupleSpace / d) return std::nullopt;
    space *= d;
  }
  return space;
}

inline TupleCode tuple_space(std::uint64_t d, std::uint32_t k) {
  auto space = checked_tuple_space(d, k);
  if (!space) {
    throw Error(ErrorKind::kCapacity,
                "d^k = " + std::to_string(d) + "^" + std::to_string(k) +
                    " exceeds the tuple-code range");
  }
  return *space;
}

/// Round half up, the rounding rule for every integer derived from a real
/// control parameter.
inline std::uint64_t round_half_up(double x) {
  return x <= 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(x + 0.5));
}

/// Model RB control parameters.
struct RbParams {
  std::uint32_t n = 0;
  std::uint32_t k = 2;
  double alpha = 0.0;
  double r = 0.0;
  double p = 0.0;
};

/// Integer instance shape together with the effective real parameters
/// recomputed from the integers.
struct DerivedParams {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint64_t d = 0;
  std::uint64_t t = 0;
  TupleCode q = 0;
  double alpha_eff = 0.0;
  double p_eff = 0.0;
  double r_eff = 0.0;
};

/// Builds DerivedParams from explicit integers. Used wherever an experiment
/// fixes (n, k, d, t, q) directly rather than through (alpha, r, p).
inline DerivedParams make_derived(std::uint32_t n, std::uint32_t k,
                                  std::uint64_t d, std::uint64_t t,
                                  TupleCode q) {
  if (k < 1 || n < k) {
    throw Error(ErrorKind::kInvalidParameters,
                "need 1 <= k <= n, got n=" + std::to_string(n) +
                    " k=" + std::to_string(k));
  }
  if (d < 1) throw Error(ErrorKind::kInvalidParameters, "d must be >= 1");
  const TupleCode space = tuple_space(d, k);
  if (q > space) {
    throw Error(ErrorKind::kInvalidParameters, "q exceeds d^k");
  }
  DerivedParams out;
  out.n = n;
  out.k = k;
  out.d = d;
  out.t = t;
  out.q = q;
  const double log_n = std::log(static_cast<double>(n));
  out.alpha_eff = std::log(static_cast<double>(d)) / log_n;
  out.p_eff = static_cast<double>(q) / static_cast<double>(space);
  out.r_eff = static_cast<double>(t) / (static_cast<double>(n) * log_n);
  return out;
}

/// d = round(n^alpha) (at least 1), t = round(r n ln n), q = round(p d^k)
/// clamped to [0, d^k].
inline DerivedParams derive_params(const RbParams& params) {
  if (params.k < 2) {
    throw Error(ErrorKind::kInvalidParameters, "k must be >= 2");
  }
  if (params.n < params.k) {
    throw Error(ErrorKind::kInvalidParameters,
                "n=" + std::to_string(params.n) + " < k=" +
                    std::to_string(params.k));
  }
  if (!(params.alpha > 0.0) || !(params.r >= 0.0) ||
      !(params.p >= 0.0 && params.p <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameters,
                "require alpha > 0, r >= 0 and 0 <= p <= 1");
  }
  const double n = params.n;
  const std::uint64_t d =
      std::max<std::uint64_t>(1, round_half_up(std::pow(n, params.alpha)));
  const std::uint64_t t = round_half_up(params.r * n * std::log(n));
  const TupleCode space = tuple_space(d, params.k);
  const TupleCode q = std::min<TupleCode>(
      space, round_half_up(params.p * static_cast<double>(space)));
  return make_derived(params.n, params.k, d, t, q);
}

struct Constraint {
  std::vector<Var> scope;               // strictly increasing, size k
  std::vector<TupleCode> incompatible;  // strictly increasing codes

  bool operator==(const Constraint&) const = default;
};

struct CspInstance {
  std::uint32_t n = 0;
  std::uint64_t d = 0;
  std::uint32_t k = 0;
  std::vector<Constraint> constraints;

  bool operator==(const CspInstance&) const = default;
};

struct Assignment {
  std::vector<Value> values;

  bool operator==(const Assignment&) const = default;
};

struct AssignmentPair {
  Assignment first;
  Assignment second;
};

/// Number of coordinates at which the two assignments agree.
inline std::uint32_t similarity(const AssignmentPair& pair) {
  const auto& a = pair.first.values;
  const auto& b = pair.second.values;
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidPair,
                "assignments have lengths " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  std::uint32_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return same;
}

/// Base-d positional encoding; the first scope position is the most
/// significant digit.
inline TupleCode encode_tuple(std::span<const Value> values, std::uint64_t d) {
  TupleCode code = 0;
  for (Value v : values) {
    if (v >= d) {
      throw Error(ErrorKind::kRange, "value " + std::to_string(v) +
                                         " outside domain of size " +
                                         std::to_string(d));
    }
    code = code * d + v;
  }
  return code;
}

inline std::vector<Value> decode_tuple(TupleCode code, std::uint64_t d,
                                       std::uint32_t k) {
  const TupleCode space = tuple_space(d, k);
  if (code >= space) {
    throw Error(ErrorKind::kRange, "tuple code " + std::to_string(code) +
                                       " outside [0, " +
                                       std::to_string(space) + ")");
  }
  std::vector<Value> values(k);
  for (std::uint32_t i = k; i-- > 0;) {
    values[i] = static_cast<Value>(code % d);
    code /= d;
  }
  return values;
}

inline void check_assignment_shape(const CspInstance& instance,
                                   const Assignment& a) {
  if (a.values.size() != instance.n) {
    throw Error(ErrorKind::kInvalidAssignment,
                "assignment has " + std::to_string(a.values.size()) +
                    " values, instance has " + std::to_string(instance.n) +
                    " variables");
  }
  for (Value v : a.values) {
    if (v >= instance.d) {
      throw Error(ErrorKind::kInvalidAssignment,
                  "value " + std::to_string(v) + " outside domain");
    }
  }
}

/// Code of the tuple that `a` induces on the scope of `c`.
inline TupleCode scope_code(const Constraint& c, const Assignment& a,
                            std::uint64_t d) {
  TupleCode code = 0;
  for (Var v : c.scope) code = code * d + a.values[v];
  return code;
}

inline bool violates(const Constraint& c, const Assignment& a,
                     std::uint64_t d) {
  return std::binary_search(c.incompatible.begin(), c.incompatible.end(),
                            scope_code(c, a, d));
}

inline bool is_satisfied(const CspInstance& instance, const Assignment& a) {
  check_assignment_shape(instance, a);
  return std::none_of(
      instance.constraints.begin(), instance.constraints.end(),
      [&](const Constraint& c) { return violates(c, a, instance.d); });
}

/// Lists every invariant violation; an empty result means the instance is
/// well formed.
inline std::vector<std::string> validate_instance(const CspInstance& instance) {
  std::vector<std::string> out;
  if (instance.k < 1) out.push_back("arity must be >= 1");
  if (instance.d < 1) out.push_back("domain size must be >= 1");
  if (instance.n < instance.k) out.push_back("fewer variables than arity");
  const auto space = checked_tuple_space(instance.d, instance.k);
  if (!space) out.push_back("d^k exceeds the tuple-code range");

  for (std::size_t i = 0; i < instance.constraints.size(); ++i) {
    const Constraint& c = instance.constraints[i];
    const std::string where = "constraint " + std::to_string(i) + ": ";
    if (c.scope.size() != instance.k) {
      out.push_back(where + "scope has " + std::to_string(c.scope.size()) +
                    " variables, expected " + std::to_string(instance.k));
    }
    for (std::size_t j = 0; j < c.scope.size(); ++j) {
      if (c.scope[j] >= instance.n) {
        out.push_back(where + "variable index " +
                      std::to_string(c.scope[j]) + " out of range");
      }
      if (j > 0 && c.scope[j - 1] >= c.scope[j]) {
        out.push_back(where + (c.scope[j - 1] == c.scope[j]
                                   ? "repeated variable in scope"
                                   : "scope not sorted"));
      }
    }
    for (TupleCode code : c.incompatible) {
      if (space && code >= *space) {
        out.push_back(where + "tuple code " + std::to_string(code) +
                      " out of range");
      }
    }
    if (!std::is_sorted(c.incompatible.begin(), c.incompatible.end())) {
      out.push_back(where + "tuple codes not sorted");
    }
    std::vector<TupleCode> codes = c.incompatible;
    std::sort(codes.begin(), codes.end());
    for (auto it = std::adjacent_find(codes.begin(), codes.end());
         it != codes.end();
         it = std::adjacent_find(std::upper_bound(it, codes.end(), *it),
                                 codes.end())) {
      out.push_back(where + "duplicate tuple " + std::to_string(*it));
    }
  }
  return out;
}

}  // namespace rbcsp
