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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "rbcsp/error.hpp"
#include "rbcsp/generator.hpp"
#include "rbcsp/model.hpp"
#include "rbcsp/random.hpp"
#include "rbcsp/solver.hpp"

namespace rbcsp {

enum class SweptParam { kP, kR, kP2 };

inline const char* to_string(SweptParam param) {
  switch (param) {
    case SweptParam::kP: return "p";
    case SweptParam::kR: return "r";
    case SweptParam::kP2: return "p2";
  }
  return "?";
}

struct SweepConfig {
  std::variant<RbParams, ModelBParams> base;
  SweptParam swept = SweptParam::kP;
  double start = 0.0;
  double stop = 1.0;
  std::optional<double> step;  // tightness sweeps default to 1/d^k
  std::uint32_t trials = 100;
  Seed seed;
  SolveLimits limits;
  unsigned threads = 1;
};

struct SweepRecord {
  double param_value = 0.0;
  std::uint32_t trials = 0;
  std::uint32_t sat_count = 0;
  // Trials without a verdict: limit hit, or instance generation failed.
  std::uint32_t aborted = 0;
  double sat_fraction = 0.0;  // sat_count / (trials - aborted); NaN if none
  std::uint64_t median_nodes = 0;
  double mean_nodes = 0.0;
  std::vector<std::string> errors;  // distinct generation errors, if any
};

namespace detail {

inline bool is_tightness(SweptParam param) {
  return param == SweptParam::kP || param == SweptParam::kP2;
}

inline double resolve_step(const SweepConfig& config) {
  if (config.step) return *config.step;
  if (!is_tightness(config.swept)) {
    throw Error(ErrorKind::kInvalidParameters,
                "an r sweep needs an explicit step");
  }
  std::uint64_t d = 0;
  std::uint32_t k = 2;
  if (const auto* rb = std::get_if<RbParams>(&config.base)) {
    RbParams probe = *rb;
    probe.p = 0.0;
    const DerivedParams derived = derive_params(probe);
    d = derived.d;
    k = derived.k;
  } else {
    d = std::get<ModelBParams>(config.base).d;
  }
  return 1.0 / static_cast<double>(tuple_space(d, k));
}

inline void check_config(const SweepConfig& config) {
  const bool rb = std::holds_alternative<RbParams>(config.base);
  if (rb == (config.swept == SweptParam::kP2)) {
    throw Error(ErrorKind::kInvalidParameters,
                std::string("swept parameter '") + to_string(config.swept) +
                    "' does not belong to the base model");
  }
  if (!(config.start <= config.stop)) {
    throw Error(ErrorKind::kInvalidParameters, "grid needs start <= stop");
  }
  if (config.step && !(*config.step > 0.0)) {
    throw Error(ErrorKind::kInvalidParameters, "grid needs step > 0");
  }
  if (config.trials < 1) {
    throw Error(ErrorKind::kInvalidParameters, "trials must be >= 1");
  }
}

/// Snaps values that drift outside [0,1] by rounding error back in.
inline double snap_unit(double x) {
  if (x < 0.0 && x > -1e-9) return 0.0;
  if (x > 1.0 && x < 1.0 + 1e-9) return 1.0;
  return x;
}

inline DerivedParams shape_at(const SweepConfig& config, double value) {
  if (const auto* rb = std::get_if<RbParams>(&config.base)) {
    RbParams params = *rb;
    if (config.swept == SweptParam::kP) {
      params.p = snap_unit(value);
    } else {
      params.r = value;
    }
    return derive_params(params);
  }
  ModelBParams params = std::get<ModelBParams>(config.base);
  params.p2 = snap_unit(value);
  return derive_model_b(params);
}

struct TrialOutcome {
  enum class Kind { kSat, kUnsat, kAborted, kError } kind = Kind::kError;
  std::uint64_t nodes = 0;
  std::string error;
};

}  // namespace detail

/// Grid values start + i * step for every i with value <= stop (with a
/// small tolerance so that the endpoint survives rounding).
inline std::vector<double> sweep_grid(const SweepConfig& config) {
  detail::check_config(config);
  const double step = detail::resolve_step(config);
  const auto count = static_cast<std::uint64_t>(
      std::floor((config.stop - config.start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    grid[i] = config.start + static_cast<double>(i) * step;
  }
  return grid;
}

/// Trial `trial` at grid point `index` uses the instance seed
/// (seed, index, trial), so records do not depend on evaluation order.
inline SweepRecord run_sweep_point(const SweepConfig& config,
                                   std::uint64_t index, double value) {
  std::vector<detail::TrialOutcome> outcomes(config.trials);
  std::optional<DerivedParams> shape;
  std::string shape_error;
  try {
    shape = detail::shape_at(config, value);
  } catch (const Error& e) {
    shape_error = e.what();
  }

  auto run_trial = [&](std::uint32_t trial) {
    detail::TrialOutcome& out = outcomes[trial];
    if (!shape) {
      out.error = shape_error;
      return;
    }
    try {
      const CspInstance instance =
          generate_from_shape(*shape, derive_seed(config.seed, {index, trial}));
      const SolveResult result = solve(instance, config.limits);
      out.nodes = result.nodes;
      out.kind = result.status == SolveStatus::kSat
                     ? detail::TrialOutcome::Kind::kSat
                 : result.status == SolveStatus::kUnsat
                     ? detail::TrialOutcome::Kind::kUnsat
                     : detail::TrialOutcome::Kind::kAborted;
    } catch (const Error& e) {
      out.kind = detail::TrialOutcome::Kind::kError;
      out.error = e.what();
    }
  };

  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    for (std::uint32_t i = 0; i < config.trials; ++i) run_trial(i);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::uint32_t i = next++; i < config.trials; i = next++) {
          run_trial(i);
        }
      });
    }
  }

  SweepRecord record;
  record.param_value = value;
  record.trials = config.trials;
  std::vector<std::uint64_t> nodes;
  std::set<std::string> errors;
  for (const auto& out : outcomes) {
    using Kind = detail::TrialOutcome::Kind;
    switch (out.kind) {
      case Kind::kSat: ++record.sat_count; break;
      case Kind::kUnsat: break;
      case Kind::kAborted: ++record.aborted; break;
      case Kind::kError:
        ++record.aborted;
        errors.insert(out.error);
        continue;
    }
    nodes.push_back(out.nodes);
  }
  record.errors.assign(errors.begin(), errors.end());
  const std::uint32_t decided = record.trials - record.aborted;
  record.sat_fraction =
      decided > 0 ? static_cast<double>(record.sat_count) / decided
                  : std::numeric_limits<double>::quiet_NaN();
  if (!nodes.empty()) {
    std::sort(nodes.begin(), nodes.end());
    record.median_nodes = nodes[(nodes.size() - 1) / 2];
    double sum = 0.0;
    for (auto x : nodes) sum += static_cast<double>(x);
    record.mean_nodes = sum / static_cast<double>(nodes.size());
  }
  return record;
}

inline std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  const auto grid = sweep_grid(config);
  std::vector<SweepRecord> records;
  records.reserve(grid.size());
  for (std::uint64_t i = 0; i < grid.size(); ++i) {
    records.push_back(run_sweep_point(config, i, grid[i]));
  }
  return records;
}

/// Linear interpolation at the first adjacent pair whose sat fractions go
/// from >= 0.5 to < 0.5. Points with no decided trials are skipped.
inline double estimate_threshold(const std::vector<SweepRecord>& records) {
  const SweepRecord* prev = nullptr;
  for (const SweepRecord& rec : records) {
    if (std::isnan(rec.sat_fraction)) continue;
    if (prev && prev->sat_fraction >= 0.5 && rec.sat_fraction < 0.5) {
      const double drop = prev->sat_fraction - rec.sat_fraction;
      return prev->param_value + (prev->sat_fraction - 0.5) / drop *
                                     (rec.param_value - prev->param_value);
    }
    prev = &rec;
  }
  throw Error(ErrorKind::kNoThreshold,
              "sat fraction never crosses 0.5 in the swept range");
}

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline constexpr const char* kSweepCsvHeader =
    "param_value,trials,sat_count,aborted,sat_fraction,median_nodes,"
    "mean_nodes";

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<SweepRecord>& records) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRecord& rec : records) {
    os << format_double(rec.param_value) << ',' << rec.trials << ','
       << rec.sat_count << ',' << rec.aborted << ','
       << format_double(rec.sat_fraction) << ',' << rec.median_nodes << ','
       << format_double(rec.mean_nodes) << '\n';
  }
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  write_sweep_csv(os, records);
  return os.str();
}

}  // namespace rbcsp
