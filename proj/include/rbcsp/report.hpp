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

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "rbcsp/error.hpp"
#include "rbcsp/generator.hpp"
#include "rbcsp/model.hpp"
#include "rbcsp/solver.hpp"
#include "rbcsp/sweep.hpp"
#include "rbcsp/theory.hpp"
#include "rbcsp/verify.hpp"

namespace rbcsp {

/// Everything the theory knows about one parameter setting.
struct TheoryReport {
  std::optional<ModelBParams> model_b;  // set for Model B inputs
  RbParams rb;                          // equivalent RB parameters
  bool has_tightness = true;            // false if p was not supplied
  std::optional<DerivedParams> derived;
  std::optional<double> r_cr;
  std::optional<double> p_cr;
  std::optional<ConditionReport> thm1;
  ConditionReport thm2;
  std::optional<ConditionReport> model_b_conditions;
  // ln E(N) with the unrounded d = n^alpha and t = r n ln n.
  std::optional<double> log_e_n_continuous;
  std::optional<MomentReport> moments;  // from the integer shape
  std::vector<std::string> notes;
};

namespace detail {

inline void fill_theory(TheoryReport& report) {
  const RbParams& rb = report.rb;
  if (rb.r > 0.0) report.p_cr = critical_p(rb.alpha, rb.r);
  report.thm2 = thm2_conditions(rb.k, rb.alpha, rb.r);
  if (!report.has_tightness) return;
  report.thm1 = thm1_conditions(rb.k, rb.alpha, rb.p);
  if (rb.p > 0.0 && rb.p < 1.0) report.r_cr = critical_r(rb.alpha, rb.p);
  const double n = rb.n;
  report.log_e_n_continuous = log_expected_solutions(
      n, std::pow(n, rb.alpha), rb.r * n * std::log(n), rb.p);
  if (report.derived) {
    try {
      report.moments = moment_report(*report.derived);
    } catch (const Error& e) {
      report.notes.push_back(std::string("moments unavailable: ") + e.what());
    }
  }
}

}  // namespace detail

inline TheoryReport theory_report(const RbParams& params) {
  TheoryReport report;
  report.rb = params;
  report.derived = derive_params(params);
  detail::fill_theory(report);
  return report;
}

/// Report for Model B <n, d, p1, p2>; p2 may be omitted, in which case the
/// tightness-dependent quantities are left out.
inline TheoryReport theory_report(std::uint32_t n, std::uint64_t d, double p1,
                                  std::optional<double> p2) {
  TheoryReport report;
  ModelBParams mb{n, d, p1, p2.value_or(0.0)};
  check_model_b(mb);
  report.model_b = mb;
  const auto [alpha, r] = model_b_to_rb(n, d, p1);
  report.rb = RbParams{n, 2, alpha, r, mb.p2};
  report.has_tightness = p2.has_value();
  if (p2) report.derived = derive_model_b(mb);
  report.model_b_conditions = model_b_conditions(n, d, p1);
  detail::fill_theory(report);
  return report;
}

// JSON encodings. Non-finite doubles (the log-zero sentinel) are written as
// the strings "-inf", "inf" or "nan" since JSON has no literal for them.

inline nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline nlohmann::json to_json(const RbParams& p) {
  return {{"n", p.n}, {"k", p.k}, {"alpha", p.alpha}, {"r", p.r}, {"p", p.p}};
}

inline nlohmann::json to_json(const ModelBParams& p) {
  return {{"n", p.n}, {"d", p.d}, {"p1", p.p1}, {"p2", p.p2}};
}

inline nlohmann::json to_json(const DerivedParams& p) {
  return {{"n", p.n},
          {"k", p.k},
          {"d", p.d},
          {"t", p.t},
          {"q", p.q},
          {"alpha_eff", p.alpha_eff},
          {"p_eff", p.p_eff},
          {"r_eff", p.r_eff}};
}

inline nlohmann::json to_json(const ConditionReport& c) {
  return {{"alpha_gt_1_over_k", c.alpha_gt_1_over_k},
          {"tightness_condition", c.tightness_condition},
          {"applicable", c.applicable},
          {"threshold", json_number(c.threshold)}};
}

inline nlohmann::json to_json(const MomentReport& m) {
  return {{"log_e_n", json_number(m.log_e_n)},
          {"log_e_n2", json_number(m.log_e_n2)},
          {"ratio_log", json_number(m.ratio_log)}};
}

inline nlohmann::json to_json(const TheoryReport& r) {
  nlohmann::json j;
  if (r.model_b) {
    j["model_b"] = {{"n", r.model_b->n}, {"d", r.model_b->d},
                    {"p1", r.model_b->p1}};
    if (r.has_tightness) j["model_b"]["p2"] = r.model_b->p2;
    j["model_b_conditions"] = to_json(*r.model_b_conditions);
  }
  j["rb"] = to_json(r.rb);
  if (!r.has_tightness) j["rb"].erase("p");
  if (r.derived) j["derived"] = to_json(*r.derived);
  if (r.r_cr) j["r_cr"] = *r.r_cr;
  if (r.p_cr) j["p_cr"] = *r.p_cr;
  if (r.thm1) j["thm1_conditions"] = to_json(*r.thm1);
  j["thm2_conditions"] = to_json(r.thm2);
  if (r.log_e_n_continuous) {
    j["log_e_n_continuous"] = json_number(*r.log_e_n_continuous);
  }
  if (r.moments) j["moments"] = to_json(*r.moments);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json j{{"status", to_string(r.status)},
                   {"nodes", r.nodes},
                   {"elapsed_seconds", r.elapsed_seconds}};
  j["witness"] = r.witness ? nlohmann::json(r.witness->values)
                           : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const MomentCheck& m, bool second) {
  nlohmann::json j{{"samples", m.samples},
                   {"mean", json_number(m.mean)},
                   {"std_error", json_number(m.std_error)},
                   {"expected", json_number(m.expected)},
                   {"log_expected", json_number(m.log_expected)},
                   {"z", json_number(m.z)}};
  if (second) {
    j["variance"] = json_number(m.variance);
    j["variance_expected"] = json_number(m.variance_expected);
    j["variance_z"] = json_number(m.variance_z);
  }
  return j;
}

inline nlohmann::json to_json(const PairCheck& c) {
  return {{"similarity", c.similarity},
          {"samples", c.samples},
          {"hits", c.hits},
          {"frequency", c.frequency},
          {"expected", json_number(c.expected)},
          {"log_expected", json_number(c.log_expected)},
          {"std_error", json_number(c.std_error)},
          {"z", json_number(c.z)}};
}

inline nlohmann::json to_json(const SweepRecord& r) {
  nlohmann::json j{{"param_value", r.param_value},
                   {"trials", r.trials},
                   {"sat_count", r.sat_count},
                   {"aborted", r.aborted},
                   {"sat_fraction", json_number(r.sat_fraction)},
                   {"median_nodes", r.median_nodes},
                   {"mean_nodes", r.mean_nodes}};
  if (!r.errors.empty()) j["errors"] = r.errors;
  return j;
}

/// Parses a sweep configuration:
///
///   {"base": {"model": "rb", "n": 20, "k": 2, "alpha": .., "r": .., "p": ..}
///         or {"model": "b", "n": 20, "d": 10, "p1": .., "p2": ..},
///    "swept": "p" | "r" | "p2",
///    "grid": {"start": .., "stop": .., "step": ..},   // step optional
///    "trials": 100, "seed": 1,                        // both optional
///    "limits": {"max_nodes": .., "max_seconds": ..},  // optional
///    "threads": 1}                                    // optional
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  try {
    SweepConfig config;
    const auto& base = j.at("base");
    const std::string model = base.at("model").get<std::string>();
    if (model == "rb") {
      RbParams rb;
      rb.n = base.at("n").get<std::uint32_t>();
      rb.k = base.value("k", 2u);
      rb.alpha = base.at("alpha").get<double>();
      rb.r = base.at("r").get<double>();
      rb.p = base.value("p", 0.0);
      config.base = rb;
    } else if (model == "b") {
      ModelBParams mb;
      mb.n = base.at("n").get<std::uint32_t>();
      mb.d = base.at("d").get<std::uint64_t>();
      mb.p1 = base.at("p1").get<double>();
      mb.p2 = base.value("p2", 0.0);
      config.base = mb;
    } else {
      throw Error(ErrorKind::kParse, "base.model must be 'rb' or 'b'");
    }
    const std::string swept = j.at("swept").get<std::string>();
    if (swept == "p") {
      config.swept = SweptParam::kP;
    } else if (swept == "r") {
      config.swept = SweptParam::kR;
    } else if (swept == "p2") {
      config.swept = SweptParam::kP2;
    } else {
      throw Error(ErrorKind::kParse, "swept must be 'p', 'r' or 'p2'");
    }
    const auto& grid = j.at("grid");
    config.start = grid.at("start").get<double>();
    config.stop = grid.at("stop").get<double>();
    if (grid.contains("step") && !grid["step"].is_null()) {
      config.step = grid["step"].get<double>();
    }
    config.trials = j.value("trials", 100u);
    config.seed = Seed{j.value("seed", std::uint64_t{0})};
    if (j.contains("limits")) {
      const auto& limits = j["limits"];
      if (limits.contains("max_nodes") && !limits["max_nodes"].is_null()) {
        config.limits.max_nodes = limits["max_nodes"].get<std::uint64_t>();
      }
      if (limits.contains("max_seconds") && !limits["max_seconds"].is_null()) {
        config.limits.max_seconds = limits["max_seconds"].get<double>();
      }
    }
    config.threads = j.value("threads", 1u);
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("sweep config: ") + e.what());
  }
}

namespace detail {

inline void print_conditions(std::ostream& os, const char* name,
                             const ConditionReport& c) {
  os << name << ": alpha>1/k=" << (c.alpha_gt_1_over_k ? "yes" : "no")
     << " tightness=" << (c.tightness_condition ? "yes" : "no")
     << " (threshold " << format_double(c.threshold) << ")"
     << " applicable=" << (c.applicable ? "yes" : "no") << '\n';
}

}  // namespace detail

inline void print_theory_report(std::ostream& os, const TheoryReport& r) {
  if (r.model_b) {
    os << "model B: n=" << r.model_b->n << " d=" << r.model_b->d
       << " p1=" << format_double(r.model_b->p1);
    if (r.has_tightness) os << " p2=" << format_double(r.model_b->p2);
    os << '\n';
    detail::print_conditions(os, "model B conditions (d^2>n, p1 bound)",
                             *r.model_b_conditions);
  }
  os << "model RB: n=" << r.rb.n << " k=" << r.rb.k
     << " alpha=" << format_double(r.rb.alpha)
     << " r=" << format_double(r.rb.r);
  if (r.has_tightness) os << " p=" << format_double(r.rb.p);
  os << '\n';
  if (r.derived) {
    const auto& d = *r.derived;
    os << "instance shape: d=" << d.d << " t=" << d.t << " q=" << d.q
       << " (alpha_eff=" << format_double(d.alpha_eff)
       << " r_eff=" << format_double(d.r_eff)
       << " p_eff=" << format_double(d.p_eff) << ")\n";
  }
  if (r.r_cr) os << "r_cr = " << format_double(*r.r_cr) << '\n';
  if (r.p_cr) os << "p_cr = " << format_double(*r.p_cr) << '\n';
  if (r.thm1) detail::print_conditions(os, "critical-r theorem", *r.thm1);
  detail::print_conditions(os, "critical-p theorem", r.thm2);
  if (r.log_e_n_continuous) {
    os << "ln E(N) (unrounded) = " << format_double(*r.log_e_n_continuous)
       << '\n';
  }
  if (r.moments) {
    os << "ln E(N) = " << format_double(r.moments->log_e_n)
       << "  ln E(N^2) = " << format_double(r.moments->log_e_n2)
       << "  2 ln E(N) - ln E(N^2) = " << format_double(r.moments->ratio_log)
       << '\n';
  }
  for (const auto& note : r.notes) os << "note: " << note << '\n';
}

}  // namespace rbcsp
