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
#include <random>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rbcsp/error.hpp"
#include "rbcsp/model.hpp"
#include "rbcsp/random.hpp"

namespace rbcsp {

/// Standard binary random CSP parameters <n, d, p1, p2>.
struct ModelBParams {
  std::uint32_t n = 0;
  std::uint64_t d = 0;
  double p1 = 0.0;
  double p2 = 0.0;
};

namespace detail {

/// Floyd's algorithm: a uniformly random `count`-subset of [0, population).
template <typename Int>
std::vector<Int> floyd_sample(Int population, Int count, Stream& stream) {
  std::unordered_set<Int> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (Int j = population - count; j < population; ++j) {
    std::uniform_int_distribution<Int> pick(0, j);
    const Int candidate = pick(stream);
    if (!chosen.insert(candidate).second) chosen.insert(j);
  }
  std::vector<Int> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Uniform k-subset of the n variables, sorted ascending.
inline std::vector<Var> sample_scope(std::uint32_t n, std::uint32_t k,
                                     Stream& stream) {
  if (k > n) {
    throw Error(ErrorKind::kInvalidParameters,
                "cannot choose " + std::to_string(k) + " of " +
                    std::to_string(n) + " variables");
  }
  return detail::floyd_sample<Var>(n, k, stream);
}

/// Uniform q-subset of [0, space_size), sorted ascending. Large q samples
/// the complement instead.
inline std::vector<TupleCode> sample_incompatible(TupleCode space_size,
                                                  TupleCode q,
                                                  Stream& stream) {
  if (q > space_size) {
    throw Error(ErrorKind::kInvalidParameters,
                "q=" + std::to_string(q) + " exceeds tuple space " +
                    std::to_string(space_size));
  }
  if (q <= space_size / 2) {
    return detail::floyd_sample<TupleCode>(space_size, q, stream);
  }
  const auto excluded =
      detail::floyd_sample<TupleCode>(space_size, space_size - q, stream);
  std::vector<TupleCode> out;
  out.reserve(q);
  auto skip = excluded.begin();
  for (TupleCode code = 0; code < space_size; ++code) {
    if (skip != excluded.end() && *skip == code) {
      ++skip;
    } else {
      out.push_back(code);
    }
  }
  return out;
}

/// Samples an instance with exactly `shape.t` constraints of arity
/// `shape.k`, each carrying exactly `shape.q` incompatible tuples.
/// Constraint i draws from the sub-stream (seed, i) only.
inline CspInstance generate_from_shape(const DerivedParams& shape, Seed seed) {
  const TupleCode space = tuple_space(shape.d, shape.k);
  if (shape.n < shape.k || shape.q > space) {
    throw Error(ErrorKind::kInvalidParameters, "inconsistent instance shape");
  }
  CspInstance instance;
  instance.n = shape.n;
  instance.d = shape.d;
  instance.k = shape.k;
  instance.constraints.resize(shape.t);
  for (std::uint64_t i = 0; i < shape.t; ++i) {
    Stream stream = make_stream(derive_seed(seed, {i}));
    Constraint& c = instance.constraints[i];
    c.scope = sample_scope(shape.n, shape.k, stream);
    c.incompatible = sample_incompatible(space, shape.q, stream);
  }
  return instance;
}

inline CspInstance generate_rb(const RbParams& params, Seed seed) {
  return generate_from_shape(derive_params(params), seed);
}

inline void check_model_b(const ModelBParams& params) {
  if (params.n < 2) {
    throw Error(ErrorKind::kInvalidParameters, "Model B needs n >= 2");
  }
  if (params.d < 1) {
    throw Error(ErrorKind::kInvalidParameters, "Model B needs d >= 1");
  }
  if (!(params.p1 >= 0.0 && params.p1 <= 1.0) ||
      !(params.p2 >= 0.0 && params.p2 <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameters,
                "Model B needs p1, p2 in [0, 1]");
  }
}

/// Integer shape of a Model B setting: t = round(p1 n(n-1)/2),
/// q = round(p2 d^2).
inline DerivedParams derive_model_b(const ModelBParams& params) {
  check_model_b(params);
  const double n = params.n;
  const std::uint64_t t = round_half_up(params.p1 * n * (n - 1.0) / 2.0);
  const TupleCode space = tuple_space(params.d, 2);
  const TupleCode q = std::min<TupleCode>(
      space, round_half_up(params.p2 * static_cast<double>(space)));
  return make_derived(params.n, 2, params.d, t, q);
}

inline CspInstance generate_model_b(const ModelBParams& params, Seed seed) {
  return generate_from_shape(derive_model_b(params), seed);
}

/// Model RB parameters of the setting equivalent to a Model B setting:
/// alpha = ln d / ln n, r = p1 (n - 1) / (2 ln n).
inline std::pair<double, double> model_b_to_rb(std::uint32_t n,
                                               std::uint64_t d, double p1) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidParameters, "need n >= 2");
  }
  if (d < 2) {
    throw Error(ErrorKind::kInvalidParameters, "need d >= 2");
  }
  const double log_n = std::log(static_cast<double>(n));
  return {std::log(static_cast<double>(d)) / log_n,
          p1 * (static_cast<double>(n) - 1.0) / (2.0 * log_n)};
}

}  // namespace rbcsp
