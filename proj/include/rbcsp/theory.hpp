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
#include <limits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rbcsp/error.hpp"
#include "rbcsp/model.hpp"

// Threshold theory for Model RB: critical values, applicability conditions,
// exact finite-n first and second moments of the solution count, and the
// auxiliary functions g, h, h'' and log f used in the second-moment argument.
//
// Logarithms of zero are represented by kLogZero (-inf), which propagates
// through sums and log_sum_exp.

namespace rbcsp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

struct MomentReport {
  double log_e_n = 0.0;
  double log_e_n2 = 0.0;
  double ratio_log = 0.0;  // 2 log E(N) - log E(N^2), <= 0
};

struct ConditionReport {
  bool alpha_gt_1_over_k = false;
  bool tightness_condition = false;
  bool applicable = false;
  // Right-hand side of the tightness inequality as evaluated: 1/(1-p) for
  // the critical-r theorem, k e^{-alpha/r} for the critical-p theorem, the
  // p1 lower bound 2 ln d / ((n-1) ln 2) for Model B.
  double threshold = 0.0;
};

/// Numerically stable log(sum(exp(x))). Returns kLogZero for an empty range
/// or when every term is kLogZero.
inline double log_sum_exp(std::span<const double> terms) {
  double top = kLogZero;
  for (double x : terms) top = std::max(top, x);
  if (top == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double x : terms) sum += std::exp(x - top);
  return top + std::log(sum);
}

/// ln C(n, m) via log-gamma; kLogZero when m > n.
inline double log_choose(std::uint64_t n, std::uint64_t m) {
  if (m > n) return kLogZero;
  if (m == 0 || m == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(n - m) + 1.0);
}

/// Exact C(n, m); zero when m > n.
inline BigInt choose(std::uint64_t n, std::uint64_t m) {
  if (m > n) return 0;
  m = std::min(m, n - m);
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= m; ++i) {
    out *= n - m + i;
    out /= i;
  }
  return out;
}

inline double log_of(const Rational& x) {
  if (x <= 0) return kLogZero;
  // Split into numerator and denominator so that neither overflows double.
  const BigInt& num = boost::multiprecision::numerator(x);
  const BigInt& den = boost::multiprecision::denominator(x);
  auto big_log = [](const BigInt& v) {
    const std::size_t bits = boost::multiprecision::msb(v);
    if (bits < 1000) return std::log(v.convert_to<double>());
    const std::size_t shift = bits - 60;
    const BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) +
           static_cast<double>(shift) * std::log(2.0);
  };
  return big_log(num) - big_log(den);
}

/// r_cr = -alpha / ln(1 - p).
inline double critical_r(double alpha, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kDomain, "critical_r needs 0 < p < 1");
  }
  if (!(alpha > 0.0)) {
    throw Error(ErrorKind::kDomain, "critical_r needs alpha > 0");
  }
  return -alpha / std::log1p(-p);
}

/// p_cr = 1 - e^{-alpha / r}.
inline double critical_p(double alpha, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::kDomain, "critical_p needs r > 0");
  if (!(alpha > 0.0)) {
    throw Error(ErrorKind::kDomain, "critical_p needs alpha > 0");
  }
  return -std::expm1(-alpha / r);
}

/// Conditions of the critical-r theorem: alpha > 1/k, 0 < p < 1 and
/// k >= 1/(1-p).
inline ConditionReport thm1_conditions(std::uint32_t k, double alpha,
                                       double p) {
  ConditionReport out;
  out.alpha_gt_1_over_k = alpha > 1.0 / k;
  const bool p_open = p > 0.0 && p < 1.0;
  out.threshold = p < 1.0 ? 1.0 / (1.0 - p)
                          : std::numeric_limits<double>::infinity();
  out.tightness_condition = p_open && static_cast<double>(k) >= out.threshold;
  out.applicable = out.alpha_gt_1_over_k && out.tightness_condition;
  return out;
}

/// Conditions of the critical-p theorem: alpha > 1/k, r > 0 and
/// k e^{-alpha/r} >= 1.
inline ConditionReport thm2_conditions(std::uint32_t k, double alpha,
                                       double r) {
  ConditionReport out;
  out.alpha_gt_1_over_k = alpha > 1.0 / k;
  out.threshold = r > 0.0 ? k * std::exp(-alpha / r) : 0.0;
  out.tightness_condition = r > 0.0 && out.threshold >= 1.0;
  out.applicable = out.alpha_gt_1_over_k && out.tightness_condition;
  return out;
}

/// Conditions under which the Model RB setting equivalent to Model B
/// <n, d, p1, .> has an exact threshold: d^2 > n and
/// p1 >= 2 ln d / ((n - 1) ln 2).
inline ConditionReport model_b_conditions(std::uint32_t n, std::uint64_t d,
                                          double p1) {
  if (n < 2 || d < 2) {
    throw Error(ErrorKind::kInvalidParameters, "need n >= 2 and d >= 2");
  }
  ConditionReport out;
  out.alpha_gt_1_over_k =
      static_cast<double>(d) * static_cast<double>(d) > static_cast<double>(n);
  out.threshold = 2.0 * std::log(static_cast<double>(d)) /
                  ((static_cast<double>(n) - 1.0) * std::log(2.0));
  out.tightness_condition = p1 >= out.threshold;
  out.applicable = out.alpha_gt_1_over_k && out.tightness_condition;
  return out;
}

/// ln E(N) = n ln d + t ln(1 - p) for real-valued d, t and p. Used when the
/// unrounded quantities n^alpha and r n ln n are wanted.
inline double log_expected_solutions(double n, double d, double t, double p) {
  if (t == 0.0) return n * std::log(d);
  if (p >= 1.0) return kLogZero;
  return n * std::log(d) + t * std::log1p(-p);
}

/// ln E(N) from the integer instance shape and its effective tightness.
inline double log_expected_solutions(const DerivedParams& derived) {
  return log_expected_solutions(derived.n, static_cast<double>(derived.d),
                                static_cast<double>(derived.t),
                                derived.p_eff);
}

struct SingleConstraintProbs {
  Rational p_same;  // both assignments agree on the whole scope
  Rational p_diff;  // they differ somewhere on the scope
};

/// Exact probabilities that a random constraint with q incompatible tuples
/// out of d^k admits one fixed tuple (p_same) or two fixed distinct tuples
/// (p_diff).
inline SingleConstraintProbs single_constraint_probs(std::uint64_t d,
                                                     std::uint32_t k,
                                                     TupleCode q) {
  const TupleCode space = tuple_space(d, k);
  if (space < 2) {
    throw Error(ErrorKind::kDegenerate,
                "d^k < 2: no two distinct tuples exist");
  }
  if (q > space) {
    throw Error(ErrorKind::kInvalidParameters, "q exceeds d^k");
  }
  const BigInt s = space;
  const BigInt free = s - q;
  SingleConstraintProbs out;
  out.p_same = Rational(free, s);
  out.p_diff = free == 0 ? Rational(0)
                         : Rational(free * (free - 1), s * (s - 1));
  return out;
}

/// Exact probability that a random constraint is satisfied by both members
/// of an assignment pair with similarity S:
/// p_same B + p_diff (1 - B), B = C(S,k)/C(n,k).
inline Rational pair_constraint_prob(const DerivedParams& derived,
                                     std::uint32_t S) {
  if (S > derived.n) {
    throw Error(ErrorKind::kRange, "similarity exceeds n");
  }
  const auto probs = single_constraint_probs(derived.d, derived.k, derived.q);
  const Rational all_same(choose(S, derived.k), choose(derived.n, derived.k));
  return probs.p_same * all_same + probs.p_diff * (1 - all_same);
}

/// ln P(<t_i, t_j>) = t ln[p_same B + p_diff (1 - B)].
inline double pair_satisfaction_log_prob(const DerivedParams& derived,
                                         std::uint32_t S) {
  if (derived.t == 0) return 0.0;
  const double log_inner = log_of(pair_constraint_prob(derived, S));
  if (log_inner == kLogZero) return kLogZero;
  return static_cast<double>(derived.t) * log_inner;
}

/// Exact |A_S| = d^n C(n,S) (d-1)^(n-S).
inline BigInt pair_count(std::uint32_t n, std::uint64_t d, std::uint32_t S) {
  if (S > n) throw Error(ErrorKind::kRange, "similarity exceeds n");
  return boost::multiprecision::pow(BigInt(d), n) * choose(n, S) *
         boost::multiprecision::pow(BigInt(d - 1), n - S);
}

/// ln |A_S|. For d = 1 only S = n is populated.
inline double log_pair_count(std::uint32_t n, std::uint64_t d,
                             std::uint32_t S) {
  if (S > n) throw Error(ErrorKind::kRange, "similarity exceeds n");
  if (d < 1) throw Error(ErrorKind::kRange, "d must be >= 1");
  const double nd = n * std::log(static_cast<double>(d));
  if (S == n) return nd;
  if (d == 1) return kLogZero;
  return nd + log_choose(n, S) +
         static_cast<double>(n - S) * std::log(static_cast<double>(d - 1));
}

/// ln E(N^2) = ln sum_S |A_S| P(<t_i, t_j> | S), summed exactly over
/// S = 0..n with a max-shifted log-sum-exp.
inline double log_second_moment(const DerivedParams& derived) {
  if (derived.t == 0) {
    return 2.0 * derived.n * std::log(static_cast<double>(derived.d));
  }
  std::vector<double> terms;
  terms.reserve(derived.n + 1);
  for (std::uint32_t S = 0; S <= derived.n; ++S) {
    const double count = log_pair_count(derived.n, derived.d, S);
    const double prob = count == kLogZero
                            ? kLogZero
                            : pair_satisfaction_log_prob(derived, S);
    terms.push_back(count == kLogZero || prob == kLogZero ? kLogZero
                                                          : count + prob);
  }
  return log_sum_exp(terms);
}

inline MomentReport moment_report(const DerivedParams& derived) {
  MomentReport out;
  out.log_e_n = log_expected_solutions(derived);
  out.log_e_n2 = log_second_moment(derived);
  out.ratio_log = out.log_e_n == kLogZero ? kLogZero
                                          : 2.0 * out.log_e_n - out.log_e_n2;
  return out;
}

/// g(s) = k(k-1)(s^k - s^(k-1))/2, the 1/n correction in
/// C(S,k)/C(n,k) = s^k + g(s)/n + O(1/n^2).
inline double g_of_s(double s, std::uint32_t k) {
  return k * (k - 1.0) * (std::pow(s, k) - std::pow(s, k - 1.0)) / 2.0;
}

inline void check_open_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kDomain, "need 0 < p < 1");
  }
}

/// h(s) = r ln(1 + p s^k / (1 - p)) - alpha s.
inline double h_of_s(double s, std::uint32_t k, double r, double p,
                     double alpha) {
  check_open_p(p);
  return r * std::log1p(p * std::pow(s, k) / (1.0 - p)) - alpha * s;
}

/// h''(s) = r k p s^(k-2) [(k-1)(1-p) - p s^k] / (1 - p + p s^k)^2.
inline double h_second_derivative(double s, std::uint32_t k, double r,
                                  double p) {
  check_open_p(p);
  const double sk = std::pow(s, k);
  const double denom = 1.0 - p + p * sk;
  return r * k * p * std::pow(s, k - 2.0) * ((k - 1.0) * (1.0 - p) - p * sk) /
         (denom * denom);
}

/// ln f(s) = h(s) n ln n.
inline double log_f(double s, std::uint32_t k, double r, double p,
                    double alpha, double n) {
  return h_of_s(s, k, r, p, alpha) * n * std::log(n);
}

}  // namespace rbcsp
