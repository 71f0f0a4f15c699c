// Copyright 2026 zxopt contributors
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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "zxopt/bench.hpp"
#include "zxopt/peephole.hpp"
#include "zxopt/ppo.hpp"
#include "zxopt/tensor.hpp"
#include "zxopt/tree.hpp"

namespace {

using nlohmann::json;

zxopt::Circuit read_circuit(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw zxopt::Error("cannot open circuit file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return zxopt::parse_circuit(ss.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw zxopt::Error("cannot open output file: " + path);
  f << content;
}

zxopt::GateRatios parse_ratios(const std::string& s) {
  zxopt::GateRatios r;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream is(s);
  if (!(is >> r.cnot >> c1 >> r.h >> c2 >> r.rx >> c3 >> r.rz) || c1 != ',' ||
      c2 != ',' || c3 != ',')
    throw zxopt::BadRatiosError("ratios must be four comma-separated numbers");
  r.validate();
  return r;
}

// Applies values from a JSON config file as defaults; explicitly passed
// command-line flags still win because they are parsed afterwards.
template <typename T>
void from_config(const json& cfg, const char* key, T& out) {
  if (cfg.contains(key)) out = cfg.at(key).get<T>();
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw zxopt::Error("cannot open config file: " + path);
  json cfg = json::parse(f, nullptr, true, true);
  if (!cfg.is_object()) throw zxopt::Error("config must be a JSON object");
  return cfg;
}

struct CommonOpts {
  std::uint64_t seed = 1;
  std::string config;
  std::string ratios = "0.6,0.2,0.1,0.1";
  int width = 5;
  int gates = 80;
};

int cmd_gen(const CommonOpts& common, const json& cfg, const std::string& out,
            int count, bool assembled, int total_gates, int block_width,
            int block_gates) {
  auto ratios = parse_ratios(common.ratios);
  std::filesystem::create_directories(out);
  zxopt::Rng root(common.seed);
  zxopt::Rng data = root.split(1);
  (void)cfg;
  for (int i = 0; i < count; ++i) {
    zxopt::Circuit c =
        assembled ? zxopt::assemble_circuit(common.width, total_gates,
                                            block_width, block_gates, ratios,
                                            data)
                  : zxopt::random_circuit(common.width, common.gates, ratios,
                                          data);
    std::ostringstream name;
    name << "circuit_" << std::setw(4) << std::setfill('0') << i << ".qc";
    write_file((std::filesystem::path(out) / name.str()).string(),
               zxopt::to_text(c));
  }
  std::cout << "gen: wrote " << count << " circuits to " << out << "\n";
  return 0;
}

int cmd_train(const CommonOpts& common, zxopt::TrainConfig cfg,
              const std::string& checkpoint, const std::string& curve) {
  cfg.ratios = parse_ratios(common.ratios);
  cfg.width = common.width;
  cfg.gates = common.gates;
  cfg.seed = common.seed;
  cfg.checkpoint_path = checkpoint;
  cfg.on_update = [](std::int64_t step, double mean_reward,
                     const zxopt::LossStats& s) {
    std::cout << "step " << step << " mean_reward " << mean_reward
              << " policy_loss " << s.policy << " value_loss " << s.value
              << " entropy " << s.entropy << "\n";
  };
  auto result = zxopt::train(cfg);
  if (!checkpoint.empty()) zxopt::save_params_file(checkpoint, result.params);
  if (!curve.empty()) {
    std::ostringstream csv;
    csv << "step,mean_reward,policy_loss,value_loss,entropy\n";
    for (const auto& row : result.curve) {
      csv << static_cast<std::int64_t>(row[0]);
      for (int i = 1; i < 5; ++i) csv << "," << row[i];
      csv << "\n";
    }
    write_file(curve, csv.str());
  }
  std::cout << "train: done, " << result.episode_rewards.size()
            << " episodes\n";
  return 0;
}

int cmd_optimize(const CommonOpts& common, const std::string& in,
                 const std::string& out, const std::string& checkpoint,
                 int budget, int restarts, int block_size, bool verify,
                 const std::string& mode) {
  zxopt::Circuit input = read_circuit(in);
  zxopt::PolicyParams params;  // uniform policy unless a checkpoint is given
  if (!checkpoint.empty()) params = zxopt::load_params_file(checkpoint);
  zxopt::Rng root(common.seed);
  zxopt::Rng rng = root.split(3);

  bool whole = mode == "whole" || (mode == "auto" && input.width <= 8);
  zxopt::Circuit result =
      whole ? zxopt::optimize_with_agent(input, params, budget, restarts, rng)
            : zxopt::peephole_optimize(input, params, budget, restarts,
                                       block_size, rng);

  bool verified = false;
  if (verify) {
    if (input.width > 8)
      throw zxopt::TooLargeError("verify: tensor oracle is limited to 8 qubits");
    verified = zxopt::equal_up_to_scalar(zxopt::circuit_to_unitary(result),
                                         zxopt::circuit_to_unitary(input),
                                         1e-9);
    if (!verified) {
      std::cerr << "error: optimized circuit failed verification\n";
      return 1;
    }
  }
  if (!out.empty()) write_file(out, zxopt::to_text(result));
  auto si = zxopt::circuit_stats(input);
  auto so = zxopt::circuit_stats(result);
  std::cout << "optimize: mode=" << (whole ? "whole" : "peephole")
            << " gates_in=" << si.gate_count << " gates_out=" << so.gate_count
            << " cnot_in=" << si.two_qubit_count
            << " cnot_out=" << so.two_qubit_count
            << " verified=" << (verify ? (verified ? "yes" : "no") : "skipped")
            << "\n";
  return 0;
}

int cmd_bench(const CommonOpts& common, int circuits,
              const std::string& methods_csv, const std::string& checkpoint,
              int budget, int restarts, const std::string& out, bool timings) {
  zxopt::DatasetSpec spec;
  spec.ratios = parse_ratios(common.ratios);
  spec.width = common.width;
  spec.gates = common.gates;
  spec.circuits = circuits;
  spec.seed = common.seed;

  zxopt::PolicyParams params;
  bool have_params = !checkpoint.empty();
  if (have_params) params = zxopt::load_params_file(checkpoint);

  std::vector<zxopt::BenchMethod> methods;
  std::istringstream is(methods_csv);
  std::string name;
  while (std::getline(is, name, ',')) {
    zxopt::BenchMethod m;
    m.name = name;
    m.budget = budget;
    m.restarts = restarts;
    if (name == "rl-agent" && have_params) m.params = &params;
    methods.push_back(m);
  }
  if (methods.empty()) throw zxopt::Error("bench: no methods given");

  zxopt::BenchOptions opts;
  opts.timings = timings;
  auto res = zxopt::run_benchmark(spec, methods, opts);
  if (!out.empty())
    write_file(out, res.csv);
  else
    std::cout << res.csv;
  for (std::size_t i = 0; i < res.method_names.size(); ++i)
    std::cout << "bench: " << res.method_names[i] << " mean=" << res.mean[i]
              << " std=" << res.stddev[i] << "\n";
  return 0;
}

int cmd_verify(const std::string& a_path, const std::string& b_path) {
  zxopt::Circuit a = read_circuit(a_path);
  zxopt::Circuit b = read_circuit(b_path);
  if (a.width != b.width) {
    std::cout << "FAIL (width mismatch)\n";
    return 1;
  }
  if (a.width > 8)
    throw zxopt::TooLargeError("verify: tensor oracle is limited to 8 qubits");
  bool ok = zxopt::equal_up_to_scalar(zxopt::circuit_to_unitary(a),
                                      zxopt::circuit_to_unitary(b), 1e-9);
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zxopt: quantum circuit optimization via ZX diagram rewriting"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with defaults");

  // gen
  auto* gen = app.add_subcommand("gen", "generate dataset circuits");
  std::string gen_out = "dataset";
  int gen_count = 100;
  bool gen_assembled = false;
  int gen_total = 2000, gen_block_width = 5, gen_block_gates = 50;
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--count", gen_count, "number of circuits");
  gen->add_flag("--assembled", gen_assembled, "use block-assembled circuits");
  gen->add_option("--total-gates", gen_total, "assembled: total gates");
  gen->add_option("--block-width", gen_block_width, "assembled: block width");
  gen->add_option("--block-gates", gen_block_gates, "assembled: block gates");

  // train
  auto* train = app.add_subcommand("train", "train the search policy");
  zxopt::TrainConfig tc;
  std::string train_checkpoint = "policy.ckpt", train_curve = "curve.csv";
  train->add_option("--steps", tc.hyper.total_steps, "total environment steps");
  train->add_option("--lr", tc.hyper.learning_rate, "learning rate");
  train->add_option("--gamma", tc.hyper.gamma, "discount factor");
  train->add_option("--budget", tc.hyper.budget, "tree budget per episode");
  train->add_option("--checkpoint", train_checkpoint, "checkpoint output");
  train->add_option("--curve", train_curve, "training curve CSV output");
  train->add_option("--checkpoint-every", tc.checkpoint_every,
                    "updates between periodic checkpoints (0 = off)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "optimize a circuit");
  std::string opt_in, opt_out, opt_checkpoint, opt_mode = "auto";
  int opt_budget = 128, opt_restarts = 3, opt_block = 5;
  bool opt_verify = false;
  opt->add_option("input", opt_in, "input circuit file")->required();
  opt->add_option("--out", opt_out, "output circuit file");
  opt->add_option("--checkpoint", opt_checkpoint, "policy checkpoint");
  opt->add_option("--budget", opt_budget, "tree budget per episode");
  opt->add_option("--restarts", opt_restarts, "search restarts");
  opt->add_option("--block-size", opt_block, "peephole partition size");
  opt->add_option("--mode", opt_mode, "auto|whole|peephole")
      ->check(CLI::IsMember({"auto", "whole", "peephole"}));
  opt->add_flag("--verify", opt_verify, "verify equivalence (width <= 8)");

  // bench
  auto* bench = app.add_subcommand("bench", "run benchmark table");
  int bench_circuits = 100, bench_budget = 128, bench_restarts = 3;
  std::string bench_methods = "extract-level-1,extract-level-4";
  std::string bench_checkpoint, bench_out;
  bool bench_timings = false;
  bench->add_option("--circuits", bench_circuits, "number of circuits");
  bench->add_option("--methods", bench_methods, "comma-separated method list");
  bench->add_option("--checkpoint", bench_checkpoint, "rl-agent checkpoint");
  bench->add_option("--budget", bench_budget, "agent tree budget");
  bench->add_option("--restarts", bench_restarts, "agent restarts");
  bench->add_option("--out", bench_out, "CSV output file (default stdout)");
  bench->add_flag("--timings", bench_timings, "record wall-clock column");

  // verify
  auto* verify = app.add_subcommand("verify", "compare two circuits");
  std::string verify_a, verify_b;
  verify->add_option("a", verify_a, "first circuit")->required();
  verify->add_option("b", verify_b, "second circuit")->required();

  // Shared dataset/seed options on the subcommands that use them.
  for (auto* sub : {gen, train, bench, opt}) {
    sub->add_option("--seed", common.seed, "root random seed");
    sub->add_option("--width", common.width, "circuit width (qubits)");
    sub->add_option("--gates", common.gates, "gates per circuit");
    sub->add_option("--ratios", common.ratios, "cnot,h,rx,rz gate ratios");
  }

  try {
    // A config file provides defaults; re-parse afterwards so explicit flags
    // override it.
    app.parse(argc, argv);
    json cfg = load_config(config_path);
    from_config(cfg, "seed", common.seed);
    from_config(cfg, "width", common.width);
    from_config(cfg, "gates", common.gates);
    from_config(cfg, "ratios", common.ratios);
    from_config(cfg, "steps", tc.hyper.total_steps);
    from_config(cfg, "learning_rate", tc.hyper.learning_rate);
    from_config(cfg, "gamma", tc.hyper.gamma);
    from_config(cfg, "budget", tc.hyper.budget);
    from_config(cfg, "restarts", opt_restarts);
    if (!cfg.empty()) {
      // Explicit command-line values win over the config file.
      app.clear();
      app.parse(argc, argv);
    }

    if (gen->parsed())
      return cmd_gen(common, cfg, gen_out, gen_count, gen_assembled, gen_total,
                     gen_block_width, gen_block_gates);
    if (train->parsed())
      return cmd_train(common, tc, train_checkpoint, train_curve);
    if (opt->parsed())
      return cmd_optimize(common, opt_in, opt_out, opt_checkpoint, opt_budget,
                          opt_restarts, opt_block, opt_verify, opt_mode);
    if (bench->parsed())
      return cmd_bench(common, bench_circuits, bench_methods, bench_checkpoint,
                       bench_budget, bench_restarts, bench_out, bench_timings);
    if (verify->parsed()) return cmd_verify(verify_a, verify_b);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const zxopt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zxopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
