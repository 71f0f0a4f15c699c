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
//
// End-to-end acceptance gate.  Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.  The
// training criterion performs a full desk-scale run and dominates the
// runtime (expect a couple of hours on a desktop CPU).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "test_helpers.hpp"
#include "zxopt/bench.hpp"
#include "zxopt/brute_force.hpp"
#include "zxopt/dataset.hpp"
#include "zxopt/diagram.hpp"
#include "zxopt/extract.hpp"
#include "zxopt/graphlike.hpp"
#include "zxopt/peephole.hpp"
#include "zxopt/ppo.hpp"
#include "zxopt/rewrite.hpp"
#include "zxopt/tensor.hpp"
#include "zxopt/tree.hpp"

using namespace zxopt;

namespace {

int g_failures = 0;

void report(int id, const char* label, bool ok, const std::string& detail) {
  std::printf("criterion %2d (%s): %s%s%s\n", id, label, ok ? "PASS" : "FAIL",
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

GateRatios dataset_i() { return GateRatios{0.6, 0.2, 0.1, 0.1}; }
GateRatios dataset_ii() { return GateRatios{1.0, 0.0, 0.0, 0.0}; }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// --------------------------------------------------------------------------
// 1. Rewrite soundness: >= 10,000 random (diagram, match) applications
//    across all seven rules preserve the tensor up to scalar, tol 1e-9.
// --------------------------------------------------------------------------
void criterion_1() {
  Rng rng(101);
  int checked = 0, failures = 0;
  std::map<RuleKind, int> by_rule;
  for (int round = 0; checked < 10000 && round < 4000; ++round) {
    int width = 1 + static_cast<int>(rng.below(2));  // <= 4 boundaries
    auto d = cleanup(circuit_to_diagram(
        testing::sample_circuit(rng, width, 4 + static_cast<int>(rng.below(7)))));
    for (int s = static_cast<int>(rng.below(5)); s > 0; --s) {
      auto ms = enumerate_matches(d);
      if (ms.empty()) break;
      d = apply_rewrite(d, ms[rng.below(ms.size())]);
    }
    auto before = diagram_to_tensor(d);
    for (const auto& m : enumerate_matches(d)) {
      auto d2 = apply_rewrite(d, m);
      if (!equal_up_to_scalar(diagram_to_tensor(d2), before, 1e-9)) ++failures;
      by_rule[m.rule]++;
      ++checked;
    }
  }
  std::ostringstream det;
  det << checked << " applications, " << by_rule.size() << " rules, "
      << failures << " failures";
  report(1, "rewrite soundness", checked >= 10000 && by_rule.size() == 7 &&
                                     failures == 0, det.str());
}

// --------------------------------------------------------------------------
// 2. Extraction round trip: >= 200 random 5-qubit 80-gate circuits survive
//    extract_with_levels with unitary equality up to scalar, tol 1e-9.
// --------------------------------------------------------------------------
void criterion_2() {
  Rng rng(202);
  int ok = 0, total = 200;
  for (int i = 0; i < total; ++i) {
    Circuit c = random_circuit(5, 80, dataset_i(), rng);
    try {
      auto res = extract_with_levels(circuit_to_diagram(c));
      if (equal_up_to_scalar(diagram_to_tensor(circuit_to_diagram(c)),
                             diagram_to_tensor(circuit_to_diagram(res.circuit)),
                             1e-9))
        ++ok;
    } catch (const Error&) {
    }
  }
  std::ostringstream det;
  det << ok << "/" << total << " round trips verified";
  report(2, "extraction round trip", ok == total, det.str());
}

// --------------------------------------------------------------------------
// 3. Level-4 baseline: on 100 4-qubit 80-CNOT circuits, level-4 mean
//    two-qubit count in [4.5, 9.0]; levels 1-3 mean in [45, 65].
// 4. Level-1 on dataset (i): mean output < mean input, 100 circuits.
// 5. Brute-force oracle: 20160 reachable, identity 0, SWAP 3, per-circuit
//    oracle <= every method's SWAP-removed count on dataset (ii).
// --------------------------------------------------------------------------
void criteria_3_4_5() {
  CnotDistanceTable table;

  // Dataset (ii) sweep shared by criteria 3 and 5.
  std::vector<std::vector<double>> level_mean(6);
  bool oracle_bounded = true;
  Rng rng(303);
  std::vector<double> oracle_vals;
  for (int i = 0; i < 100; ++i) {
    Circuit c = random_circuit(4, 80, dataset_ii(), rng);
    int oracle = brute_force_cnot_count_upto_perm(c, table);
    oracle_vals.push_back(oracle);
    for (int lvl = 1; lvl <= 5; ++lvl) {
      try {
        auto g = simplify_level(to_graph_like(circuit_to_diagram(c)), lvl);
        Circuit out = extract_circuit(g);
        level_mean[lvl].push_back(
            static_cast<double>(circuit_stats(out).two_qubit_count));
        auto noswap = circuit_stats(remove_swaps(out).first).two_qubit_count;
        if (oracle > noswap) oracle_bounded = false;
      } catch (const Error&) {
      }
    }
  }
  double l1 = mean_of(level_mean[1]);
  double l2 = mean_of(level_mean[2]);
  double l3 = mean_of(level_mean[3]);
  double l4 = mean_of(level_mean[4]);
  bool c3 = level_mean[4].size() == 100 && l4 >= 4.5 && l4 <= 9.0;
  for (double m : {l1, l2, l3}) c3 = c3 && m >= 45.0 && m <= 65.0;
  {
    std::ostringstream det;
    det << "level means 1-4: " << l1 << ", " << l2 << ", " << l3 << ", " << l4;
    report(3, "level-4 baseline vs reference", c3, det.str());
  }

  // Criterion 4: level-1 extraction on dataset (i).
  {
    Rng rng4(404);
    std::vector<double> in_counts, out_counts;
    for (int i = 0; i < 100; ++i) {
      Circuit c = random_circuit(5, 80, dataset_i(), rng4);
      in_counts.push_back(
          static_cast<double>(circuit_stats(c).two_qubit_count));
      auto g = simplify_level(to_graph_like(circuit_to_diagram(c)), 1);
      out_counts.push_back(static_cast<double>(
          circuit_stats(extract_circuit(g)).two_qubit_count));
    }
    std::ostringstream det;
    det << "mean out " << mean_of(out_counts) << " vs mean in "
        << mean_of(in_counts);
    report(4, "level-1 reduces dataset (i)",
           mean_of(out_counts) < mean_of(in_counts), det.str());
  }

  // Criterion 5: oracle sanity plus the bound gathered above.
  {
    std::uint16_t ident = 0;
    for (int r = 0; r < 4; ++r) ident |= CnotDistanceTable::bit(r, r);
    std::uint16_t swap01 = 0;
    swap01 |= CnotDistanceTable::bit(0, 1);
    swap01 |= CnotDistanceTable::bit(1, 0);
    swap01 |= CnotDistanceTable::bit(2, 2);
    swap01 |= CnotDistanceTable::bit(3, 3);
    bool ok = table.reachable_count() == 20160 && table.distance(ident) == 0 &&
              table.distance(swap01) == 3 && oracle_bounded;
    std::ostringstream det;
    det << "reachable " << table.reachable_count() << ", identity "
        << table.distance(ident) << ", SWAP " << table.distance(swap01)
        << ", oracle mean " << mean_of(oracle_vals)
        << (oracle_bounded ? ", bound holds" : ", bound VIOLATED");
    report(5, "brute-force oracle", ok, det.str());
  }
}

// --------------------------------------------------------------------------
// 6. Training improves over baseline: seeded >= 50,000-step run on dataset
//    (i); last 5% episode reward beats first 5% by >= 0.05; trained agent
//    beats the best fixed level and the uniform policy on held-out circuits.
// --------------------------------------------------------------------------
void criterion_6() {
  TrainConfig cfg;
  cfg.ratios = dataset_i();
  cfg.width = 5;
  cfg.gates = 80;
  cfg.seed = 606;
  cfg.hyper.total_steps = 50000;
  TrainResult res = train(cfg);

  const auto& er = res.episode_rewards;
  std::size_t tail = std::max<std::size_t>(1, er.size() / 20);
  double first = 0.0, last = 0.0;
  for (std::size_t i = 0; i < tail; ++i) first += er[i];
  for (std::size_t i = er.size() - tail; i < er.size(); ++i) last += er[i];
  first /= static_cast<double>(tail);
  last /= static_cast<double>(tail);

  // Held-out evaluation, disjoint seed from training.
  Rng data(607);
  PolicyParams uniform;  // all-zero weights
  std::vector<double> trained_counts, uniform_counts;
  std::vector<std::vector<double>> fixed(6);
  Rng agent_rng(608), uniform_rng(608);
  for (int i = 0; i < 100; ++i) {
    Circuit c = random_circuit(5, 80, dataset_i(), data);
    Circuit t = run_with_restarts(c, res.params, 128, 3, agent_rng);
    trained_counts.push_back(
        static_cast<double>(circuit_stats(t).two_qubit_count));
    Circuit u = run_with_restarts(c, uniform, 128, 3, uniform_rng);
    uniform_counts.push_back(
        static_cast<double>(circuit_stats(u).two_qubit_count));
    for (int lvl = 1; lvl <= 5; ++lvl) {
      try {
        auto g = simplify_level(to_graph_like(circuit_to_diagram(c)), lvl);
        fixed[lvl].push_back(static_cast<double>(
            circuit_stats(extract_circuit(g)).two_qubit_count));
      } catch (const Error&) {
      }
    }
  }
  double best_fixed = 1e300;
  for (int lvl = 1; lvl <= 5; ++lvl)
    if (fixed[lvl].size() == 100) best_fixed = std::min(best_fixed, mean_of(fixed[lvl]));
  double tm = mean_of(trained_counts), um = mean_of(uniform_counts);
  bool ok = (last - first >= 0.05) && tm <= best_fixed && tm <= um;
  std::ostringstream det;
  det << "reward first/last 5%: " << first << "/" << last << "; trained "
      << tm << " vs best fixed " << best_fixed << " vs uniform " << um;
  report(6, "training improves over baseline", ok, det.str());
}

// --------------------------------------------------------------------------
// 7. Gradient correctness: analytic gradients vs central differences on a
//    synthetic 3-step trajectory, max relative error < 1e-4.
// --------------------------------------------------------------------------
void criterion_7() {
  Rng rng(707);
  PolicyParams params = PolicyParams::init(rng);

  TrainBatch batch;
  NodeArena arena;
  for (int i = 0; i < 5; ++i) {
    FeatureVector f{};
    for (auto& x : f) x = 2.0 * rng.real() - 1.0;
    arena.features.push_back(f);
    arena.parent.push_back(i == 0 ? -1 : static_cast<int>(rng.below(i)));
  }
  batch.arenas.push_back(arena);
  Hyperparams hyper;
  std::vector<int> indices = {0, 1, 2};
  for (int s = 0; s < 3; ++s) {
    StepSample st;
    st.arena = 0;
    st.live = 3 + s;
    for (int i = 0; i < st.live; ++i) st.candidates.push_back(i);
    st.chosen = static_cast<int>(rng.below(st.candidates.size()));
    st.advantage = 2.0 * rng.real() - 1.0;
    st.ret = 2.0 * rng.real() - 1.0;
    st.old_logprob = 0.0;  // replaced below with the on-policy value
    batch.steps.push_back(st);
  }
  // Make the batch exactly on-policy so the clipped surrogate is smooth at
  // the evaluation point.
  for (auto& st : batch.steps) {
    auto e = detail::eval_arena(params, batch.arenas[st.arena], st.live);
    std::vector<double> logits;
    double mx = -1e300;
    for (int cand : st.candidates) {
      double pw = e.path_sum[cand] / e.path_len[cand];
      logits.push_back(pw);
      mx = std::max(mx, pw);
    }
    double z = 0.0;
    for (double l : logits) z += std::exp(l - mx);
    st.old_logprob = logits[st.chosen] - mx - std::log(z);
  }

  PolicyParams grad;
  ppo_loss(params, batch, indices, hyper, &grad);

  double max_rel = 0.0;
  const double eps = 1e-5;
  auto tensors = params.tensors();
  auto gtensors = grad.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    for (std::size_t k = 0; k < tensors[t]->size(); ++k) {
      double saved = (*tensors[t])[k];
      (*tensors[t])[k] = saved + eps;
      double up = ppo_loss(params, batch, indices, hyper, nullptr).total;
      (*tensors[t])[k] = saved - eps;
      double dn = ppo_loss(params, batch, indices, hyper, nullptr).total;
      (*tensors[t])[k] = saved;
      double fd = (up - dn) / (2.0 * eps);
      double an = (*gtensors[t])[k];
      double denom = std::max({1e-6, std::abs(fd), std::abs(an)});
      max_rel = std::max(max_rel, std::abs(fd - an) / denom);
    }
  }
  std::ostringstream det;
  det << "max relative error " << max_rel;
  report(7, "gradient correctness", max_rel < 1e-4, det.str());
}

// --------------------------------------------------------------------------
// 8. Tree mechanics: sampling distribution, telescoping rewards, and
//    monotone tree reward.
// --------------------------------------------------------------------------
void criterion_8() {
  Rng rng(808);

  // (a) Empirical softmax sampling within TV distance 0.02 of exact.
  Circuit c(3);
  c.push(Gate::cnot(0, 1));
  c.push(Gate::cnot(1, 2));
  c.push(Gate::cnot(0, 2));
  SearchTree tree(c, 64);
  for (int s = 0; s < 6; ++s) {
    auto cands = tree.candidate_nodes();
    if (cands.empty()) break;
    tree.expand(cands[0], tree.node(cands[0]).untried.front());
  }
  {
    Rng wr(42);
    for (std::size_t i = 0; i < tree.nodes().size(); ++i)
      tree.node(static_cast<int>(i)).weight = 2.0 * wr.real() - 1.0;
  }
  auto cands = tree.candidate_nodes();
  std::vector<double> exact(cands.size());
  double mx = -1e300, z = 0.0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    exact[i] = tree.path_weight(cands[i]);
    mx = std::max(mx, exact[i]);
  }
  for (double& e : exact) {
    e = std::exp(e - mx);
    z += e;
  }
  for (double& e : exact) e /= z;
  std::map<int, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) counts[tree.select_node(rng).first]++;
  double tv = 0.0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double emp = static_cast<double>(counts[cands[i]]) / draws;
    tv += std::abs(emp - exact[i]);
  }
  tv /= 2.0;

  // (b) Per-step rewards telescope to the final tree reward.
  bool telescopes = true;
  for (int trial = 0; trial < 5; ++trial) {
    Circuit rc = random_circuit(4, 30, dataset_i(), rng);
    PolicyParams p = PolicyParams::init(rng);
    auto ep = run_episode(rc, p, 40, rng);
    double sum = ep.trajectory.total_reward();
    if (std::abs(sum - ep.tree.tree_reward()) > 1e-12) telescopes = false;
  }

  // (c) tree_reward is monotone under expansion.
  bool monotone = true;
  for (int trial = 0; trial < 5; ++trial) {
    Circuit rc = random_circuit(4, 30, dataset_i(), rng);
    SearchTree t(rc, 64);
    double prev = t.tree_reward();
    for (int s = 0; s < 40; ++s) {
      auto cs = t.candidate_nodes();
      if (cs.empty()) break;
      int nid = cs[rng.below(cs.size())];
      try {
        t.expand(nid, t.choose_match(nid, rng));
      } catch (const ExtractionFailedError&) {
        break;
      }
      double now = t.tree_reward();
      if (now < prev - 1e-15) monotone = false;
      prev = now;
    }
  }
  std::ostringstream det;
  det << "TV " << tv << ", telescoping " << (telescopes ? "ok" : "BAD")
      << ", monotone " << (monotone ? "ok" : "BAD");
  report(8, "tree mechanics", tv <= 0.02 && telescopes && monotone, det.str());
}

// --------------------------------------------------------------------------
// 9. Peephole pipeline: verified-equal 8-qubit result with no regression,
//    and a 50-qubit run that completes and reduces the two-qubit count.
// --------------------------------------------------------------------------
void criterion_9() {
  PolicyParams uniform;
  bool small_ok = false, large_ok = false;
  std::int64_t in_small = 0, out_small = 0, in_large = 0, out_large = 0;
  {
    Rng rng(909);
    Circuit c = assemble_circuit(8, 200, 5, 50, dataset_ii(), rng);
    Rng prng(910);
    Circuit out = peephole_optimize(c, uniform, 64, 1, 5, prng);
    in_small = circuit_stats(c).two_qubit_count;
    out_small = circuit_stats(out).two_qubit_count;
    small_ok = out_small <= in_small &&
               equal_up_to_scalar(circuit_to_unitary(c),
                                  circuit_to_unitary(out), 1e-9);
  }
  {
    Rng rng(911);
    Circuit c = assemble_circuit(50, 2000, 5, 50, dataset_ii(), rng);
    Rng prng(912);
    Circuit out = peephole_optimize(c, uniform, 64, 1, 5, prng);
    in_large = circuit_stats(c).two_qubit_count;
    out_large = circuit_stats(out).two_qubit_count;
    large_ok = out_large < in_large;
  }
  std::ostringstream det;
  det << "8q " << in_small << "->" << out_small << " (verified), 50q "
      << in_large << "->" << out_large;
  report(9, "peephole pipeline", small_ok && large_ok, det.str());
}

// --------------------------------------------------------------------------
// 10. Determinism: identical seeds give byte-identical artifacts.
// --------------------------------------------------------------------------
void criterion_10() {
  bool ok = true;
  std::ostringstream det;

  // Benchmark CSV.
  DatasetSpec spec;
  spec.ratios = dataset_ii();
  spec.width = 4;
  spec.gates = 80;
  spec.circuits = 5;
  spec.seed = 1001;
  std::vector<BenchMethod> methods = {{"extract-level-1"}, {"extract-level-4"},
                                      {"brute-force"}};
  auto b1 = run_benchmark(spec, methods);
  auto b2 = run_benchmark(spec, methods);
  if (b1.csv != b2.csv) { ok = false; det << "bench CSV differs; "; }

  // Dataset generation.
  Rng g1(1002), g2(1002);
  for (int i = 0; i < 5 && ok; ++i) {
    Circuit c1 = random_circuit(5, 40, dataset_i(), g1);
    Circuit c2 = random_circuit(5, 40, dataset_i(), g2);
    if (!(c1.gates == c2.gates)) { ok = false; det << "generator differs; "; }
  }

  // Optimizer output.
  {
    Rng d(1003);
    Circuit c = random_circuit(5, 40, dataset_i(), d);
    PolicyParams uniform;
    Rng r1(1004), r2(1004);
    Circuit o1 = run_with_restarts(c, uniform, 32, 1, r1);
    Circuit o2 = run_with_restarts(c, uniform, 32, 1, r2);
    if (!(o1.gates == o2.gates)) { ok = false; det << "optimizer differs; "; }
  }

  // Short training run: identical curves, parameters, and checkpoint bytes.
  {
    TrainConfig cfg;
    cfg.ratios = dataset_i();
    cfg.seed = 1005;
    cfg.hyper.total_steps = 512;
    auto r1 = train(cfg);
    auto r2 = train(cfg);
    if (!(r1.params == r2.params) || r1.curve != r2.curve) {
      ok = false;
      det << "training differs; ";
    }
    save_params_file("acc_ckpt_a.bin", r1.params);
    save_params_file("acc_ckpt_b.bin", r2.params);
    std::ifstream fa("acc_ckpt_a.bin", std::ios::binary);
    std::ifstream fb("acc_ckpt_b.bin", std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) { ok = false; det << "checkpoint bytes differ; "; }
    std::remove("acc_ckpt_a.bin");
    std::remove("acc_ckpt_b.bin");
  }

  report(10, "determinism", ok, ok ? "all artifacts byte-identical" : det.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criteria_3_4_5();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_6();  // last: the desk-scale training run dominates the runtime
  std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ACCEPTANCE PASSED"
                                                     : "ACCEPTANCE FAILED",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
