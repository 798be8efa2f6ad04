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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rbcsp/error.hpp"
#include "rbcsp/model.hpp"

// Chronological backtracking with forward checking and minimum-remaining-
// values variable ordering (ties to the lowest index), values tried in
// ascending order. Deterministic: the node count depends only on the
// instance.

namespace rbcsp {

struct SolveLimits {
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> max_seconds;
};

enum class SolveStatus { kSat, kUnsat, kAborted };

inline const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSat: return "SAT";
    case SolveStatus::kUnsat: return "UNSAT";
    case SolveStatus::kAborted: return "ABORTED";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::kAborted;
  std::optional<Assignment> witness;  // present iff SAT
  std::uint64_t nodes = 0;            // value assignments attempted
  double elapsed_seconds = 0.0;
};

struct CountResult {
  std::uint64_t count = 0;
  bool capped = false;  // stopped on reaching the cap
};

namespace detail {

/// O(1) membership for one constraint's incompatible set: a bitmap when the
/// tuple space is small, a hash set otherwise.
class TupleIndex {
 public:
  static constexpr TupleCode kBitmapLimit = TupleCode{1} << 22;

  TupleIndex(const std::vector<TupleCode>& codes, TupleCode space) {
    if (space <= kBitmapLimit) {
      bitmap_.assign(space, false);
      for (TupleCode c : codes) bitmap_[c] = true;
    } else {
      hashed_.insert(codes.begin(), codes.end());
    }
  }

  bool contains(TupleCode code) const {
    return bitmap_.empty() ? hashed_.count(code) != 0 : bitmap_[code];
  }

 private:
  std::vector<bool> bitmap_;
  std::unordered_set<TupleCode> hashed_;
};

class ForwardChecker {
 public:
  static constexpr Value kUnassigned = static_cast<Value>(-1);

  ForwardChecker(const CspInstance& instance, const SolveLimits& limits)
      : instance_(instance),
        limits_(limits),
        d_(instance.d),
        start_(std::chrono::steady_clock::now()) {
    const TupleCode space = tuple_space(instance.d, instance.k);
    const std::size_t m = instance.constraints.size();
    index_.reserve(m);
    weights_.resize(m);
    unassigned_.resize(m, instance.k);
    watches_.resize(instance.n);
    for (std::size_t c = 0; c < m; ++c) {
      const Constraint& con = instance.constraints[c];
      index_.emplace_back(con.incompatible, space);
      auto& w = weights_[c];
      w.resize(instance.k);
      TupleCode weight = 1;
      for (std::uint32_t pos = instance.k; pos-- > 0;) {
        w[pos] = weight;
        weight *= d_;
      }
      for (std::uint32_t pos = 0; pos < instance.k; ++pos) {
        watches_[con.scope[pos]].push_back({c, pos});
      }
    }
    alive_.assign(instance.n, std::vector<char>(d_, 1));
    domain_size_.assign(instance.n, d_);
    value_.assign(instance.n, kUnassigned);
  }

  /// Runs the search, calling `on_solution(values)` at every complete
  /// assignment. The callback returns false to stop. Returns false if a
  /// limit was hit.
  template <typename OnSolution>
  bool run(OnSolution&& on_solution) {
    stop_ = false;
    aborted_ = false;
    search(0, on_solution);
    return !aborted_;
  }

  std::uint64_t nodes() const { return nodes_; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  struct Watch {
    std::size_t constraint;
    std::uint32_t position;
  };

  bool limit_hit() {
    if (limits_.max_nodes && nodes_ >= *limits_.max_nodes) return true;
    if (limits_.max_seconds && (nodes_ & 0xff) == 0 &&
        elapsed() >= *limits_.max_seconds) {
      return true;
    }
    return false;
  }

  Var pick_variable() const {
    Var best = kNoVar;
    std::uint64_t best_size = 0;
    for (Var v = 0; v < instance_.n; ++v) {
      if (value_[v] != kUnassigned) continue;
      if (best == kNoVar || domain_size_[v] < best_size) {
        best = v;
        best_size = domain_size_[v];
      }
    }
    return best;
  }

  /// Assigns var := val and prunes neighbours. Returns false on a domain
  /// wipe-out or a violated constraint. Always pushes exactly what undo()
  /// pops, whatever the outcome.
  bool assign(Var var, Value val) {
    value_[var] = val;
    bool ok = true;
    for (const Watch& w : watches_[var]) --unassigned_[w.constraint];
    for (const Watch& w : watches_[var]) {
      if (!ok) break;
      const std::size_t c = w.constraint;
      const Constraint& con = instance_.constraints[c];
      if (unassigned_[c] > 1) continue;
      TupleCode partial = 0;
      std::uint32_t free_pos = instance_.k;
      for (std::uint32_t pos = 0; pos < instance_.k; ++pos) {
        const Value v = value_[con.scope[pos]];
        if (v == kUnassigned) {
          free_pos = pos;
        } else {
          partial += weights_[c][pos] * v;
        }
      }
      if (free_pos == instance_.k) {
        if (index_[c].contains(partial)) ok = false;
        continue;
      }
      const Var other = con.scope[free_pos];
      const TupleCode step = weights_[c][free_pos];
      auto& alive = alive_[other];
      for (Value x = 0; x < d_; ++x) {
        if (alive[x] && index_[c].contains(partial + step * x)) {
          alive[x] = 0;
          --domain_size_[other];
          trail_.push_back({other, x});
        }
      }
      if (domain_size_[other] == 0) ok = false;
    }
    return ok;
  }

  void undo(Var var, std::size_t trail_mark) {
    while (trail_.size() > trail_mark) {
      const auto [v, x] = trail_.back();
      trail_.pop_back();
      alive_[v][x] = 1;
      ++domain_size_[v];
    }
    for (const Watch& w : watches_[var]) ++unassigned_[w.constraint];
    value_[var] = kUnassigned;
  }

  template <typename OnSolution>
  void search(std::uint32_t depth, OnSolution& on_solution) {
    if (depth == instance_.n) {
      if (!on_solution(value_)) stop_ = true;
      return;
    }
    const Var var = pick_variable();
    for (Value x = 0; x < d_ && !stop_; ++x) {
      if (!alive_[var][x]) continue;
      if (limit_hit()) {
        aborted_ = stop_ = true;
        return;
      }
      ++nodes_;
      const std::size_t mark = trail_.size();
      if (assign(var, x)) search(depth + 1, on_solution);
      undo(var, mark);
    }
  }

  static constexpr Var kNoVar = static_cast<Var>(-1);

  const CspInstance& instance_;
  SolveLimits limits_;
  std::uint64_t d_;
  std::chrono::steady_clock::time_point start_;

  std::vector<TupleIndex> index_;
  std::vector<std::vector<TupleCode>> weights_;
  std::vector<std::uint32_t> unassigned_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::vector<char>> alive_;
  std::vector<std::uint64_t> domain_size_;
  std::vector<Value> value_;
  std::vector<std::pair<Var, Value>> trail_;

  std::uint64_t nodes_ = 0;
  bool stop_ = false;
  bool aborted_ = false;
};

inline void require_valid(const CspInstance& instance) {
  const auto violations = validate_instance(instance);
  if (!violations.empty()) {
    std::string msg = violations.front();
    if (violations.size() > 1) {
      msg += " (and " + std::to_string(violations.size() - 1) + " more)";
    }
    throw Error(ErrorKind::kValidation, msg);
  }
}

}  // namespace detail

inline SolveResult solve(const CspInstance& instance,
                         const SolveLimits& limits = {}) {
  detail::require_valid(instance);
  detail::ForwardChecker search(instance, limits);
  SolveResult result;
  const bool completed = search.run([&](const std::vector<Value>& values) {
    result.witness = Assignment{values};
    return false;
  });
  result.nodes = search.nodes();
  result.elapsed_seconds = search.elapsed();
  if (result.witness) {
    if (!is_satisfied(instance, *result.witness)) {
      throw Error(ErrorKind::kValidation, "solver produced a bad witness");
    }
    result.status = SolveStatus::kSat;
  } else {
    result.status = completed ? SolveStatus::kUnsat : SolveStatus::kAborted;
  }
  return result;
}

/// Exact number of satisfying assignments, or `cap` with capped = true if at
/// least that many exist.
inline CountResult count_solutions(const CspInstance& instance,
                                   std::optional<std::uint64_t> cap = {}) {
  detail::require_valid(instance);
  CountResult result;
  if (cap && *cap == 0) {
    result.capped = true;
    return result;
  }
  detail::ForwardChecker search(instance, {});
  search.run([&](const std::vector<Value>&) {
    ++result.count;
    if (cap && result.count >= *cap) {
      result.capped = true;
      return false;
    }
    return true;
  });
  return result;
}

}  // namespace rbcsp
