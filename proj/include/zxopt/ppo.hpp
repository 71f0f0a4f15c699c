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

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zxopt/dataset.hpp"
#include "zxopt/errors.hpp"
#include "zxopt/mlp.hpp"
#include "zxopt/tree.hpp"

namespace zxopt {

struct Hyperparams {
  double learning_rate = 3e-4;
  double gamma = 0.99;
  int batch = 128;
  int envs = 8;
  double entropy_coef = 1e-5;
  double clip = 0.2;
  double gae_lambda = 0.95;
  int epochs = 4;
  int rollout = 16;
  int budget = 128;
  int minibatches = 4;
  double value_coef = 0.5;
  std::int64_t total_steps = 50000;

  void validate() const {
    if (envs * rollout != batch)
      throw Error("hyperparams: envs * rollout must equal batch");
  }
};

// ---------------------------------------------------------------------------
// Training batch.  Each step sample references an arena: the feature/parent
// arrays of every node its episode had created by the end of the rollout
// window.  `live` bounds which nodes existed at selection time, which is all
// the structure needed to recompute path-weight softmax log-probs.
// ---------------------------------------------------------------------------

struct NodeArena {
  std::vector<FeatureVector> features;
  std::vector<int> parent;  // -1 for the root
};

struct StepSample {
  int arena = 0;
  std::vector<int> candidates;  // node ids, ascending
  int chosen = 0;               // index into candidates
  double old_logprob = 0.0;
  double advantage = 0.0;
  double ret = 0.0;  // value target
  int live = 1;      // nodes 0..live-1 existed at selection time
};

struct TrainBatch {
  std::vector<NodeArena> arenas;
  std::vector<StepSample> steps;
};

struct LossStats {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

namespace detail {

// Per-arena evaluation under the current parameters: forward caches for the
// first `live_max` nodes plus path-weight prefix data.
struct ArenaEval {
  std::vector<ForwardCache> cache;
  std::vector<int> path_len;      // depth + 1
  std::vector<double> path_sum;   // sum of W along root path
  std::vector<double> dw, dv;     // accumulated upstream gradients
};

inline ArenaEval eval_arena(const PolicyParams& p, const NodeArena& a,
                            int live_max) {
  ArenaEval e;
  e.cache.resize(live_max);
  e.path_len.resize(live_max);
  e.path_sum.resize(live_max);
  e.dw.assign(live_max, 0.0);
  e.dv.assign(live_max, 0.0);
  for (int i = 0; i < live_max; ++i) {
    e.cache[i] = policy_forward_cached(p, a.features[i]);
    int par = a.parent[i];
    if (par < 0) {
      e.path_len[i] = 1;
      e.path_sum[i] = e.cache[i].w;
    } else {
      e.path_len[i] = e.path_len[par] + 1;
      e.path_sum[i] = e.path_sum[par] + e.cache[i].w;
    }
  }
  return e;
}

}  // namespace detail

// Evaluates the clipped-surrogate loss over the given step indices and, when
// `grad` is non-null, accumulates the analytic gradient (mean over steps).
inline LossStats ppo_loss(const PolicyParams& params, const TrainBatch& batch,
                          const std::vector<int>& indices,
                          const Hyperparams& hyper, PolicyParams* grad) {
  LossStats stats;
  if (indices.empty()) return stats;
  const double inv_n = 1.0 / static_cast<double>(indices.size());

  // Evaluate each arena once at the largest live size needed.
  std::vector<int> live_max(batch.arenas.size(), 0);
  for (int idx : indices) {
    const auto& s = batch.steps[idx];
    live_max[s.arena] = std::max(live_max[s.arena], s.live);
  }
  std::vector<std::optional<detail::ArenaEval>> evals(batch.arenas.size());
  for (std::size_t a = 0; a < batch.arenas.size(); ++a)
    if (live_max[a] > 0)
      evals[a] = detail::eval_arena(params, batch.arenas[a],
                                    live_max[a]);

  for (int idx : indices) {
    const auto& s = batch.steps[idx];
    auto& e = *evals[s.arena];
    const auto& arena = batch.arenas[s.arena];
    const std::size_t k = s.candidates.size();

    // Softmax over path weights of the candidates.
    std::vector<double> logits(k);
    double mx = -1e300;
    for (std::size_t i = 0; i < k; ++i) {
      int c = s.candidates[i];
      logits[i] = e.path_sum[c] / e.path_len[c];
      mx = std::max(mx, logits[i]);
    }
    double z = 0.0;
    std::vector<double> prob(k);
    for (std::size_t i = 0; i < k; ++i) {
      prob[i] = std::exp(logits[i] - mx);
      z += prob[i];
    }
    double entropy = 0.0;
    for (auto& pr : prob) {
      pr /= z;
      if (pr > 0) entropy -= pr * std::log(pr);
    }
    double logp = std::log(prob[s.chosen]);
    if (!std::isfinite(logp)) throw NonFiniteError("ppo: non-finite log-prob");

    // Clipped surrogate.
    double ratio = std::exp(logp - s.old_logprob);
    double clipped =
        std::clamp(ratio, 1.0 - hyper.clip, 1.0 + hyper.clip) * s.advantage;
    double unclipped = ratio * s.advantage;
    double pg = -std::min(unclipped, clipped);
    bool pass_through = unclipped <= clipped;

    // Value loss against the return target; the state value max-pools V over
    // the live nodes (subgradient flows to the argmax node).
    int vstar = 0;
    double vmax = -1e300;
    for (int i = 0; i < s.live; ++i)
      if (e.cache[i].v > vmax) {
        vmax = e.cache[i].v;
        vstar = i;
      }
    double verr = vmax - s.ret;
    double vloss = verr * verr;

    stats.policy += pg * inv_n;
    stats.value += vloss * inv_n;
    stats.entropy += entropy * inv_n;
    stats.total +=
        (pg + hyper.value_coef * vloss - hyper.entropy_coef * entropy) * inv_n;

    if (!grad) continue;

    // d total / d logp_chosen, then through the softmax into per-node W.
    double dlogp = pass_through ? -s.advantage * ratio : 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double dlogit = dlogp * ((static_cast<int>(i) == s.chosen ? 1.0 : 0.0) -
                               prob[i]);
      // Entropy bonus: d(-coef*H)/dlogit_i = coef * p_i * (log p_i + H).
      dlogit += hyper.entropy_coef * prob[i] * (std::log(prob[i]) + entropy);
      dlogit *= inv_n;
      // Distribute onto the W head of every node on the candidate's path.
      int c = s.candidates[i];
      double share = dlogit / e.path_len[c];
      for (int u = c; u != -1; u = arena.parent[u]) e.dw[u] += share;
    }
    e.dv[vstar] += hyper.value_coef * 2.0 * verr * inv_n;
  }

  if (grad) {
    for (std::size_t a = 0; a < batch.arenas.size(); ++a) {
      if (!evals[a]) continue;
      auto& e = *evals[a];
      for (std::size_t i = 0; i < e.cache.size(); ++i)
        if (e.dw[i] != 0.0 || e.dv[i] != 0.0)
          policy_backward(params, e.cache[i], e.dw[i], e.dv[i], *grad);
    }
  }
  if (!std::isfinite(stats.total))
    throw NonFiniteError("ppo: non-finite loss");
  return stats;
}

// Generalized advantage estimation over one env's rollout window.
// `bootstrap` is the collection-time value of the state after the last step
// (0 when the window ended an episode).
inline void compute_gae(std::vector<StepSample>& steps,
                        const std::vector<Trajectory::Step>& window,
                        double bootstrap, const Hyperparams& hyper) {
  const int n = static_cast<int>(window.size());
  std::vector<double> adv(n, 0.0);
  double running = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    double next_v = (t + 1 < n) ? window[t + 1].value : bootstrap;
    double not_done = window[t].done ? 0.0 : 1.0;
    if (t + 1 < n && window[t].done) next_v = 0.0;
    double delta =
        window[t].reward + hyper.gamma * next_v * not_done - window[t].value;
    running = delta + hyper.gamma * hyper.gae_lambda * not_done * running;
    adv[t] = running;
  }
  for (int t = 0; t < n; ++t) {
    steps[t].advantage = adv[t];
    steps[t].ret = adv[t] + window[t].value;
  }
}

// One PPO update: epochs x minibatch passes with Adam.
inline LossStats ppo_update(PolicyParams& params, TrainBatch& batch,
                            const Hyperparams& hyper, Adam& opt, Rng& rng) {
  // Normalize advantages across the batch.
  {
    double mean = 0.0;
    for (const auto& s : batch.steps) mean += s.advantage;
    mean /= std::max<std::size_t>(1, batch.steps.size());
    double var = 0.0;
    for (const auto& s : batch.steps) {
      double d = s.advantage - mean;
      var += d * d;
    }
    var /= std::max<std::size_t>(1, batch.steps.size());
    double sd = std::sqrt(var) + 1e-8;
    for (auto& s : batch.steps) s.advantage = (s.advantage - mean) / sd;
  }

  std::vector<int> order(batch.steps.size());
  std::iota(order.begin(), order.end(), 0);
  LossStats last;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    std::size_t mb = std::max<std::size_t>(
        1, order.size() / static_cast<std::size_t>(hyper.minibatches));
    for (std::size_t start = 0; start < order.size(); start += mb) {
      std::vector<int> idx(order.begin() + start,
                           order.begin() +
                               std::min(order.size(), start + mb));
      PolicyParams grad;
      last = ppo_loss(params, batch, idx, hyper, &grad);
      opt.step(params, grad);
    }
  }
  return last;
}

// ---------------------------------------------------------------------------
// Training loop: eight sequential episode environments, rollout windows of 16
// steps, fresh dataset circuits per episode, fully deterministic.
// ---------------------------------------------------------------------------

struct TrainConfig {
  Hyperparams hyper;
  GateRatios ratios;
  int width = 5;
  int gates = 80;
  std::uint64_t seed = 1;
  int checkpoint_every = 0;  // updates between checkpoints, 0 = off
  std::string checkpoint_path;
  std::function<void(std::int64_t, double, const LossStats&)> on_update;
};

struct TrainResult {
  PolicyParams params;
  std::vector<std::array<double, 5>> curve;  // step, mean_reward, pg, v, ent
  std::vector<double> episode_rewards;       // in completion order
};

namespace detail {

// A single persistent episode environment.
struct EpisodeEnv {
  std::optional<SearchTree> tree;
  Trajectory traj;
  std::size_t consumed = 0;  // steps already emitted to earlier windows
  double prev_reward = 0.0;
  bool finished = false;

  void reset(const Circuit& c, int budget) {
    tree.emplace(c, budget);
    traj = Trajectory{};
    traj.node_features.push_back(tree->node(0).features);
    traj.node_parent.push_back(-1);
    consumed = 0;
    prev_reward = tree->tree_reward();
    finished = false;
  }

  // Advances one search step; returns false when the episode is over.
  bool step(const PolicyParams& params, Rng& rng) {
    if (finished || tree->steps() >= tree->budget()) return false;
    tree->refresh_policy(params);
    auto cands = tree->candidate_nodes();
    if (cands.empty()) {
      finished = true;
      return false;
    }
    auto [nid, logp] = tree->select_node(rng);
    Match m = tree->choose_match(nid, rng);
    Trajectory::Step st;
    st.candidates = cands;
    st.chosen = static_cast<int>(
        std::find(cands.begin(), cands.end(), nid) - cands.begin());
    st.logprob = logp;
    st.value = tree->tree_value();
    st.live = static_cast<int>(tree->nodes().size());
    try {
      int child = tree->expand(nid, m);
      traj.node_features.push_back(tree->node(child).features);
      traj.node_parent.push_back(tree->node(child).parent);
    } catch (const ExtractionFailedError&) {
      finished = true;
      return false;
    }
    double now = tree->tree_reward();
    st.reward = now - prev_reward;
    prev_reward = now;
    if (tree->steps() >= tree->budget()) {
      st.done = true;
      finished = true;
    }
    traj.steps.push_back(std::move(st));
    return true;
  }
};

}  // namespace detail

inline TrainResult train(const TrainConfig& config) {
  config.hyper.validate();
  config.ratios.validate();
  TrainResult result;

  Rng root(config.seed);
  Rng data_rng = root.split(1);
  Rng update_rng = root.split(2);
  Rng init_rng = root.split(3);
  std::vector<Rng> env_rngs;
  for (int e = 0; e < config.hyper.envs; ++e)
    env_rngs.push_back(root.split(100 + static_cast<std::uint64_t>(e)));

  result.params = PolicyParams::init(init_rng);
  Adam opt;
  opt.lr = config.hyper.learning_rate;

  std::vector<detail::EpisodeEnv> envs(config.hyper.envs);
  auto fresh = [&] {
    return random_circuit(config.width, config.gates, config.ratios, data_rng);
  };
  auto reset_env = [&](detail::EpisodeEnv& env) {
    for (;;) {
      Circuit c = fresh();
      try {
        env.reset(c, config.hyper.budget);
        if (env.tree->node(0).cnot_count > 0) return;  // skip degenerate roots
      } catch (const ExtractionFailedError&) {
      }
    }
  };
  for (auto& env : envs) reset_env(env);

  std::int64_t steps_done = 0;
  std::int64_t update_index = 0;
  while (steps_done < config.hyper.total_steps) {
    TrainBatch batch;
    for (int e = 0; e < config.hyper.envs; ++e) {
      auto& env = envs[e];
      std::size_t start = env.consumed;
      int made = 0;
      while (made < config.hyper.rollout) {
        if (!env.step(result.params, env_rngs[e])) {
          if (!env.traj.steps.empty() && env.consumed < env.traj.steps.size())
            env.traj.steps.back().done = true;
          if (env.finished || env.tree->steps() >= env.tree->budget() ||
              env.tree->candidate_nodes().empty()) {
            // Episode over mid-window: harvest what we have and reset.
            if (env.traj.steps.size() > start) break;
            result.episode_rewards.push_back(env.prev_reward);
            reset_env(env);
            start = 0;
            continue;
          }
        } else {
          ++made;
        }
      }
      std::size_t stop = env.traj.steps.size();
      if (stop == start) continue;

      NodeArena arena;
      arena.features = env.traj.node_features;
      arena.parent = env.traj.node_parent;
      batch.arenas.push_back(std::move(arena));
      int arena_id = static_cast<int>(batch.arenas.size()) - 1;

      std::vector<Trajectory::Step> window(env.traj.steps.begin() + start,
                                           env.traj.steps.begin() + stop);
      double bootstrap = 0.0;
      if (!window.back().done) {
        env.tree->refresh_policy(result.params);
        bootstrap = env.tree->tree_value();
      }
      std::vector<StepSample> samples(window.size());
      for (std::size_t t = 0; t < window.size(); ++t) {
        samples[t].arena = arena_id;
        samples[t].candidates = window[t].candidates;
        samples[t].chosen = window[t].chosen;
        samples[t].old_logprob = window[t].logprob;
        samples[t].live = window[t].live;
      }
      compute_gae(samples, window, bootstrap, config.hyper);
      for (auto& s : samples) batch.steps.push_back(std::move(s));
      env.consumed = stop;
      steps_done += static_cast<std::int64_t>(window.size());
      if (env.finished) {
        result.episode_rewards.push_back(env.prev_reward);
        reset_env(env);
      }
    }
    if (batch.steps.empty()) continue;

    LossStats stats =
        ppo_update(result.params, batch, config.hyper, opt, update_rng);
    ++update_index;

    double mean_reward = 0.0;
    std::size_t recent = std::min<std::size_t>(32, result.episode_rewards.size());
    for (std::size_t i = result.episode_rewards.size() - recent;
         i < result.episode_rewards.size(); ++i)
      mean_reward += result.episode_rewards[i];
    if (recent > 0) mean_reward /= static_cast<double>(recent);
    result.curve.push_back({static_cast<double>(steps_done), mean_reward,
                            stats.policy, stats.value, stats.entropy});
    if (config.on_update) config.on_update(steps_done, mean_reward, stats);
    if (config.checkpoint_every > 0 && !config.checkpoint_path.empty() &&
        update_index % config.checkpoint_every == 0)
      save_params_file(config.checkpoint_path, result.params);
  }
  return result;
}

}  // namespace zxopt
