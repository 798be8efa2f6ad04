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

// rbcsp: generate, solve and analyse random CSP instances.
//
//   rbcsp gen    --model rb|b ... --seed S [-o FILE]
//   rbcsp solve  FILE [--max-nodes N] [--max-seconds T]
//   rbcsp theory --model rb|b ... [--json]
//   rbcsp sweep  CONFIG.json --seed S [-o FILE] [--threads N]
//   rbcsp verify first|second|pair --n .. --d .. --k .. --t .. --q ..
//                [--S ..] --seeds M --seed S

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rbcsp/rbcsp.hpp"

namespace {

struct ModelOptions {
  std::string model = "rb";
  std::uint32_t n = 0;
  std::uint32_t k = 2;
  std::uint64_t d = 0;
  double alpha = 0.0;
  double r = 0.0;
  std::optional<double> p;
  double p1 = 0.0;
  std::optional<double> p2;
};

void add_model_options(CLI::App* app, ModelOptions& opts) {
  app->add_option("--model", opts.model, "rb (Model RB) or b (Model B)")
      ->check(CLI::IsMember({"rb", "b"}));
  app->add_option("--n", opts.n, "number of variables")->required();
  app->add_option("--k", opts.k, "constraint arity (rb)");
  app->add_option("--alpha", opts.alpha, "domain exponent, d = n^alpha (rb)");
  app->add_option("--r", opts.r, "density, t = r n ln n (rb)");
  app->add_option("--p", opts.p, "tightness (rb)");
  app->add_option("--d", opts.d, "domain size (b)");
  app->add_option("--p1", opts.p1, "constraint density (b)");
  app->add_option("--p2", opts.p2, "constraint tightness (b)");
}

rbcsp::RbParams rb_params(const ModelOptions& opts) {
  return rbcsp::RbParams{opts.n, opts.k, opts.alpha, opts.r,
                         opts.p.value_or(0.0)};
}

rbcsp::ModelBParams model_b_params(const ModelOptions& opts) {
  return rbcsp::ModelBParams{opts.n, opts.d, opts.p1, opts.p2.value_or(0.0)};
}

/// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw rbcsp::Error(rbcsp::ErrorKind::kParse, "cannot open " + path);
  }
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model RB / Model B random CSP workbench"};
  app.require_subcommand(1);

  // gen
  ModelOptions gen_opts;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate an instance (RBCSP format)");
  add_model_options(gen, gen_opts);
  gen->add_option("--seed", gen_seed, "random seed")->required();
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  // solve
  std::string solve_in;
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> max_seconds;
  auto* solve = app.add_subcommand("solve", "solve an RBCSP file, print JSON");
  solve->add_option("file", solve_in, "instance file ('-' for stdin)")
      ->required();
  solve->add_option("--max-nodes", max_nodes, "node limit");
  solve->add_option("--max-seconds", max_seconds, "time limit");

  // theory
  ModelOptions theory_opts;
  bool theory_json = false;
  auto* theory = app.add_subcommand("theory", "critical values and moments");
  add_model_options(theory, theory_opts);
  theory->add_flag("--json", theory_json, "emit JSON instead of text");

  // sweep
  std::string sweep_config;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  std::optional<unsigned> sweep_threads;
  bool sweep_threshold = false;
  auto* sweep = app.add_subcommand("sweep", "phase-transition sweep to CSV");
  sweep->add_option("config", sweep_config, "JSON sweep configuration")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--seed", sweep_seed, "random seed")->required();
  sweep->add_option("-o,--output", sweep_out, "CSV file (default stdout)");
  sweep->add_option("--threads", sweep_threads, "worker threads");
  sweep->add_flag("--threshold", sweep_threshold,
                  "print the estimated 0.5-crossing to stderr");

  // verify
  std::string verify_kind;
  std::uint32_t v_n = 0, v_k = 2, v_S = 0;
  std::uint64_t v_d = 0, v_t = 0, v_q = 0, v_seeds = 0, v_seed = 0;
  auto* verify = app.add_subcommand("verify", "Monte-Carlo moment checks");
  verify->add_option("kind", verify_kind, "first | second | pair")
      ->required()
      ->check(CLI::IsMember({"first", "second", "pair"}));
  verify->add_option("--n", v_n)->required();
  verify->add_option("--d", v_d)->required();
  verify->add_option("--k", v_k);
  verify->add_option("--t", v_t)->required();
  verify->add_option("--q", v_q)->required();
  verify->add_option("--S", v_S, "similarity (pair)");
  verify->add_option("--seeds", v_seeds, "number of instances")->required();
  verify->add_option("--seed", v_seed, "random seed")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const rbcsp::Seed seed{gen_seed};
      const rbcsp::CspInstance instance =
          gen_opts.model == "rb"
              ? rbcsp::generate_rb(rb_params(gen_opts), seed)
              : rbcsp::generate_model_b(model_b_params(gen_opts), seed);
      with_output(gen_out, [&](std::ostream& os) {
        rbcsp::write_instance(os, instance);
      });
    } else if (*solve) {
      rbcsp::CspInstance instance;
      if (solve_in == "-") {
        instance = rbcsp::read_instance(std::cin);
      } else {
        std::ifstream in(solve_in, std::ios::binary);
        if (!in) {
          throw rbcsp::Error(rbcsp::ErrorKind::kParse,
                             "cannot open " + solve_in);
        }
        instance = rbcsp::read_instance(in);
      }
      const auto result =
          rbcsp::solve(instance, rbcsp::SolveLimits{max_nodes, max_seconds});
      std::cout << rbcsp::to_json(result).dump() << '\n';
    } else if (*theory) {
      const auto report =
          theory_opts.model == "rb"
              ? rbcsp::theory_report(rb_params(theory_opts))
              : rbcsp::theory_report(theory_opts.n, theory_opts.d,
                                     theory_opts.p1, theory_opts.p2);
      if (theory_json) {
        std::cout << rbcsp::to_json(report).dump(2) << '\n';
      } else {
        rbcsp::print_theory_report(std::cout, report);
      }
    } else if (*sweep) {
      std::ifstream in(sweep_config);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw rbcsp::Error(rbcsp::ErrorKind::kParse, e.what());
      }
      auto config = rbcsp::sweep_config_from_json(j);
      config.seed = rbcsp::Seed{sweep_seed};
      if (sweep_threads) config.threads = *sweep_threads;
      const auto records = rbcsp::run_sweep(config);
      with_output(sweep_out, [&](std::ostream& os) {
        rbcsp::write_sweep_csv(os, records);
      });
      for (const auto& rec : records) {
        for (const auto& err : rec.errors) {
          std::cerr << "warning: at " << rbcsp::format_double(rec.param_value)
                    << ": " << err << '\n';
        }
      }
      if (sweep_threshold) {
        std::cerr << "threshold "
                  << rbcsp::format_double(rbcsp::estimate_threshold(records))
                  << '\n';
      }
    } else if (*verify) {
      const auto shape = rbcsp::make_derived(v_n, v_k, v_d, v_t, v_q);
      const rbcsp::Seed seed{v_seed};
      nlohmann::json j;
      if (verify_kind == "first") {
        j = rbcsp::to_json(rbcsp::verify_first_moment(shape, v_seeds, seed),
                           false);
      } else if (verify_kind == "second") {
        j = rbcsp::to_json(rbcsp::verify_second_moment(shape, v_seeds, seed),
                           true);
      } else {
        j = rbcsp::to_json(
            rbcsp::verify_pair_probability(shape, v_S, v_seeds, seed));
      }
      j["kind"] = verify_kind;
      j["shape"] = rbcsp::to_json(shape);
      std::cout << j.dump(2) << '\n';
    }
  } catch (const rbcsp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
