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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "test_helpers.hpp"
#include "zxopt/ppo.hpp"
#include "zxopt/tensor.hpp"
#include "zxopt/tree.hpp"

using namespace zxopt;

namespace {

Circuit two_cnot_circuit() {
  Circuit c(2);
  c.push(Gate::cnot(0, 1));
  c.push(Gate::cnot(0, 1));
  return c;
}

}  // namespace

TEST_CASE("tree basics: candidates, path weight, reward") {
  SearchTree tree(two_cnot_circuit());
  REQUIRE(tree.candidate_nodes() == std::vector<int>{0});
  REQUIRE(tree.node(0).cnot_count >= 0);
  REQUIRE(tree.tree_reward() == 0.0);

  SECTION("path weight is the mean along the root path") {
    Rng rng(7);
    Match m = tree.choose_match(0, rng);
    int child = tree.expand(0, m);
    tree.node(0).weight = 1.0;
    tree.node(child).weight = 0.5;
    REQUIRE(tree.path_weight(0) == Catch::Approx(1.0));
    REQUIRE(tree.path_weight(child) == Catch::Approx(0.75));
  }

  SECTION("expanding a consumed match raises InvalidMatchError") {
    Rng rng(7);
    Match m = tree.choose_match(0, rng);
    tree.expand(0, m);
    REQUIRE_THROWS_AS(tree.expand(0, m), InvalidMatchError);
  }

  SECTION("step counter increments per expansion") {
    Rng rng(7);
    REQUIRE(tree.steps() == 0);
    tree.expand(0, tree.choose_match(0, rng));
    REQUIRE(tree.steps() == 1);
  }
}

TEST_CASE("select_node follows the softmax of path weights") {
  SearchTree tree(two_cnot_circuit());
  Rng rng(31);
  int child = tree.expand(0, tree.choose_match(0, rng));
  REQUIRE(tree.candidate_nodes().size() == 2);

  // Weight the nodes so path weights are (ln 3, 0): probabilities (0.75, 0.25).
  tree.node(0).weight = std::log(3.0);
  tree.node(child).weight = -std::log(3.0);  // mean over path = 0
  int draws = 100000;
  int first = 0;
  double logp0 = 0.0, logp1 = 0.0;
  for (int i = 0; i < draws; ++i) {
    auto [id, lp] = tree.select_node(rng);
    if (id == 0) {
      ++first;
      logp0 = lp;
    } else {
      logp1 = lp;
    }
  }
  double p = static_cast<double>(first) / draws;
  // Total-variation distance of empirical vs exact must stay within 0.02.
  REQUIRE(std::abs(p - 0.75) <= 0.02);
  REQUIRE(logp0 == Catch::Approx(std::log(0.75)).margin(1e-12));
  REQUIRE(logp1 == Catch::Approx(std::log(0.25)).margin(1e-12));
}

TEST_CASE("single candidate is selected with log-probability zero") {
  SearchTree tree(two_cnot_circuit());
  Rng rng(5);
  auto [id, lp] = tree.select_node(rng);
  REQUIRE(id == 0);
  REQUIRE(lp == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("choose_match is uniform over untried matches") {
  SearchTree tree(two_cnot_circuit());
  std::size_t k = tree.node(0).untried.size();
  REQUIRE(k >= 2);
  Rng rng(71);
  std::map<std::string, int> counts;
  int draws = 10000;
  for (int i = 0; i < draws; ++i) counts[tree.choose_match(0, rng).str()]++;
  for (const auto& [name, n] : counts) {
    double freq = static_cast<double>(n) / draws;
    REQUIRE(std::abs(freq - 1.0 / static_cast<double>(k)) < 0.03);
  }
}

TEST_CASE("episode rewards telescope and the tree stays equivalent") {
  Rng data(91);
  auto c = testing::sample_circuit(data, 3, 8, false);
  PolicyParams params;  // zero network: uniform node selection
  Rng rng(92);
  auto ep = run_episode(c, params, 24, rng);
  REQUIRE(ep.trajectory.total_reward() ==
          Catch::Approx(ep.tree.tree_reward()).margin(1e-12));
  // Reward is monotone in tree growth: replaying a prefix can only be <=.
  auto base = circuit_to_unitary(c);
  for (const auto& n : ep.tree.nodes()) {
    REQUIRE(equal_up_to_scalar(diagram_to_tensor(n.diagram), base, 1e-9));
    REQUIRE(equal_up_to_scalar(circuit_to_unitary(n.extraction.circuit), base,
                               1e-9));
  }
}

TEST_CASE("tree_reward is monotone under expansion") {
  Rng data(93);
  auto c = testing::sample_circuit(data, 3, 8, false);
  SearchTree tree(c);
  Rng rng(94);
  double prev = tree.tree_reward();
  for (int i = 0; i < 12; ++i) {
    auto cands = tree.candidate_nodes();
    if (cands.empty()) break;
    int nid = cands[rng.below(cands.size())];
    try {
      tree.expand(nid, tree.choose_match(nid, rng));
    } catch (const ExtractionFailedError&) {
      break;
    }
    double now = tree.tree_reward();
    REQUIRE(now >= prev - 1e-15);
    prev = now;
  }
}

TEST_CASE("budget zero episode returns the bare root") {
  auto c = two_cnot_circuit();
  PolicyParams params;
  Rng rng(1);
  auto ep = run_episode(c, params, 0, rng);
  REQUIRE(ep.tree.nodes().size() == 1);
  REQUIRE(ep.trajectory.steps.empty());
  REQUIRE(ep.trajectory.total_reward() == 0.0);
}

TEST_CASE("episodes are deterministic under a fixed seed") {
  Rng data(95);
  auto c = testing::sample_circuit(data, 3, 10, false);
  Rng i1(7);
  PolicyParams params = PolicyParams::init(i1);
  Rng r1(123), r2(123);
  auto e1 = run_episode(c, params, 16, r1);
  auto e2 = run_episode(c, params, 16, r2);
  REQUIRE(e1.tree.nodes().size() == e2.tree.nodes().size());
  for (std::size_t i = 0; i < e1.tree.nodes().size(); ++i) {
    const auto& a = e1.tree.nodes()[i];
    const auto& b = e2.tree.nodes()[i];
    REQUIRE(a.parent == b.parent);
    REQUIRE(a.cnot_count == b.cnot_count);
    REQUIRE(a.diagram == b.diagram);
  }
}

TEST_CASE("run_with_restarts never returns worse than its input") {
  Rng data(96);
  PolicyParams params;
  for (int trial = 0; trial < 5; ++trial) {
    auto c = testing::sample_circuit(data, 3, 12, false);
    Rng rng(500 + trial);
    auto best = run_with_restarts(c, params, 12, 2, rng);
    REQUIRE(circuit_stats(best).two_qubit_count <=
            circuit_stats(c).two_qubit_count);
    REQUIRE(equal_up_to_scalar(circuit_to_unitary(best), circuit_to_unitary(c),
                               1e-9));
  }
}

TEST_CASE("feature vector shape and degenerate cases") {
  Circuit empty(0);
  auto d = circuit_to_diagram(Circuit(1));
  auto f = featurize(empty, circuit_to_diagram(empty));
  for (double x : f) REQUIRE(x == 0.0);

  Circuit c(2);
  for (int i = 0; i < 5; ++i) c.push(Gate::cnot(0, 1));
  auto g = featurize(c, circuit_to_diagram(c));
  REQUIRE(g[0] == 5.0);   // gate count
  REQUIRE(g[1] == 0.0);   // t count
  REQUIRE(g[3] == 5.0);   // two-qubit count
  REQUIRE(g[8 + 3] == Catch::Approx(1.0));   // per-gate normalization
  REQUIRE(g[16 + 3] == Catch::Approx(2.5));  // per-qubit normalization
}

TEST_CASE("mlp forward, zero network, and checkpoint round trip") {
  FeatureVector x{};
  for (int i = 0; i < kFeatureDim; ++i) x[i] = 0.1 * (i + 1);

  PolicyParams zero;
  auto [w0, v0] = policy_forward(zero, x);
  REQUIRE(w0 == 0.0);
  REQUIRE(v0 == 0.0);

  Rng rng(17);
  PolicyParams p = PolicyParams::init(rng);
  auto [w, v] = policy_forward(p, x);
  REQUIRE(std::isfinite(w));
  REQUIRE(std::isfinite(v));

  std::stringstream ss;
  save_params(ss, p);
  PolicyParams q = load_params(ss);
  REQUIRE(p == q);
  auto [w2, v2] = policy_forward(q, x);
  REQUIRE(w == w2);
  REQUIRE(v == v2);
}

TEST_CASE("analytic ppo gradient matches central finite differences") {
  Rng rng(2024);
  // Synthetic 3-step trajectory over a 4-node arena.
  TrainBatch batch;
  NodeArena arena;
  arena.parent = {-1, 0, 0, 1};
  for (int i = 0; i < 4; ++i) {
    FeatureVector f{};
    for (int j = 0; j < kFeatureDim; ++j) f[j] = rng.normal() * 0.5;
    arena.features.push_back(f);
  }
  batch.arenas.push_back(arena);

  PolicyParams params = PolicyParams::init(rng);

  auto make_step = [&](std::vector<int> cands, int chosen, int live,
                       double adv, double ret) {
    StepSample s;
    s.arena = 0;
    s.candidates = std::move(cands);
    s.chosen = chosen;
    s.live = live;
    s.advantage = adv;
    s.ret = ret;
    return s;
  };
  batch.steps.push_back(make_step({0}, 0, 1, 0.7, 0.3));
  batch.steps.push_back(make_step({0, 1, 2}, 1, 3, -0.4, 0.1));
  batch.steps.push_back(make_step({1, 2, 3}, 2, 4, 1.2, 0.6));

  Hyperparams hyper;
  std::vector<int> idx = {0, 1, 2};
  // Old log-probs = collection-time values so every ratio starts at 1 (well
  // inside the clip interval, away from the min/clamp kinks).
  {
    LossStats probe = ppo_loss(params, batch, idx, hyper, nullptr);
    (void)probe;
    for (auto& s : batch.steps) {
      auto e = detail::eval_arena(params, batch.arenas[0], s.live);
      std::vector<double> logits;
      double mx = -1e300;
      for (int c : s.candidates) {
        logits.push_back(e.path_sum[c] / e.path_len[c]);
        mx = std::max(mx, logits.back());
      }
      double z = 0.0;
      for (double l : logits) z += std::exp(l - mx);
      s.old_logprob = logits[s.chosen] - mx - std::log(z);
    }
  }

  PolicyParams grad;
  LossStats base = ppo_loss(params, batch, idx, hyper, &grad);
  REQUIRE(std::isfinite(base.total));

  auto ptensors = params.tensors();
  auto gtensors = grad.tensors();
  double h = 1e-6;
  int checked = 0;
  for (std::size_t k = 0; k < ptensors.size(); ++k) {
    auto& pv = *ptensors[k];
    const auto& gv = *gtensors[k];
    std::size_t stride = std::max<std::size_t>(1, pv.size() / 7);
    for (std::size_t i = 0; i < pv.size(); i += stride) {
      double saved = pv[i];
      pv[i] = saved + h;
      double up = ppo_loss(params, batch, idx, hyper, nullptr).total;
      pv[i] = saved - h;
      double dn = ppo_loss(params, batch, idx, hyper, nullptr).total;
      pv[i] = saved;
      double fd = (up - dn) / (2.0 * h);
      double denom = std::max({std::abs(fd), std::abs(gv[i]), 1e-6});
      REQUIRE(std::abs(fd - gv[i]) / denom < 1e-4);
      ++checked;
    }
  }
  REQUIRE(checked >= 50);
}

TEST_CASE("ppo update with zero advantages and zero entropy is a no-op") {
  Rng rng(77);
  TrainBatch batch;
  NodeArena arena;
  arena.parent = {-1, 0};
  for (int i = 0; i < 2; ++i) {
    FeatureVector f{};
    for (int j = 0; j < kFeatureDim; ++j) f[j] = rng.normal();
    arena.features.push_back(f);
  }
  batch.arenas.push_back(arena);
  StepSample s;
  s.arena = 0;
  s.candidates = {0, 1};
  s.chosen = 0;
  s.live = 2;
  s.advantage = 0.0;
  s.ret = 0.0;
  batch.steps.push_back(s);

  PolicyParams params = PolicyParams::init(rng);
  Hyperparams hyper;
  hyper.entropy_coef = 0.0;
  hyper.value_coef = 0.0;
  PolicyParams grad;
  ppo_loss(params, batch, {0}, hyper, &grad);
  for (const auto* t : grad.tensors())
    for (double g : *t) REQUIRE(g == 0.0);
}

TEST_CASE("gae telescopes correctly with gamma = lambda = 1 on a done window") {
  Hyperparams hyper;
  hyper.gamma = 1.0;
  hyper.gae_lambda = 1.0;
  std::vector<Trajectory::Step> window(3);
  window[0].reward = 0.1;
  window[0].value = 0.5;
  window[1].reward = 0.2;
  window[1].value = 0.4;
  window[2].reward = 0.3;
  window[2].value = 0.2;
  window[2].done = true;
  std::vector<StepSample> steps(3);
  compute_gae(steps, window, 0.0, hyper);
  // With gamma = lambda = 1 the advantage is the reward-to-go minus value.
  REQUIRE(steps[0].advantage == Catch::Approx(0.6 - 0.5));
  REQUIRE(steps[1].advantage == Catch::Approx(0.5 - 0.4));
  REQUIRE(steps[2].advantage == Catch::Approx(0.3 - 0.2));
  REQUIRE(steps[0].ret == Catch::Approx(0.6));
}

TEST_CASE("tiny training run is deterministic and finite") {
  TrainConfig cfg;
  cfg.hyper.total_steps = 64;
  cfg.hyper.envs = 2;
  cfg.hyper.rollout = 8;
  cfg.hyper.batch = 16;
  cfg.hyper.budget = 12;
  cfg.ratios = GateRatios{1.0, 0.0, 0.0, 0.0};
  cfg.width = 3;
  cfg.gates = 10;
  cfg.seed = 42;
  auto r1 = train(cfg);
  auto r2 = train(cfg);
  REQUIRE(r1.params == r2.params);
  REQUIRE(!r1.curve.empty());
  REQUIRE(r1.curve.size() == r2.curve.size());
  for (const auto* t : r1.params.tensors())
    for (double x : *t) REQUIRE(std::isfinite(x));
}
