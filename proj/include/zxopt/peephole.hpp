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
#include <numeric>
#include <vector>

#include "zxopt/circuit.hpp"
#include "zxopt/errors.hpp"
#include "zxopt/tree.hpp"

namespace zxopt {

struct Block {
  std::vector<int> qubits;  // sorted global qubit indices, size <= k
  std::vector<Gate> gates;  // global indices, original relative order
};

struct Partition {
  int width = 0;
  std::vector<Block> blocks;
};

// Greedy left-to-right partitioner.  A gate may join any block at or after
// the latest block touching one of its qubits (this preserves the relative
// order of qubit-sharing gates on reassembly); among those, the most recent
// block whose qubit set stays within k wins, else a new block opens.
inline Partition partition_circuit(const Circuit& c, int k = 5) {
  Partition p;
  p.width = c.width;
  auto gate_qubits = [](const Gate& g) {
    std::vector<int> q = {g.q0};
    if (g.q1 >= 0) q.push_back(g.q1);
    return q;
  };
  for (const auto& g : c.gates) {
    auto gq = gate_qubits(g);
    if (static_cast<int>(gq.size()) > k)
      throw Error("partition: gate arity exceeds block size");
    int barrier = -1;  // latest block touching one of g's qubits
    for (int j = 0; j < static_cast<int>(p.blocks.size()); ++j)
      for (int q : gq)
        if (std::find(p.blocks[j].qubits.begin(), p.blocks[j].qubits.end(),
                      q) != p.blocks[j].qubits.end())
          barrier = std::max(barrier, j);
    int target = -1;
    for (int j = static_cast<int>(p.blocks.size()) - 1;
         j >= std::max(barrier, 0) && j >= 0; --j) {
      std::vector<int> merged = p.blocks[j].qubits;
      for (int q : gq)
        if (std::find(merged.begin(), merged.end(), q) == merged.end())
          merged.push_back(q);
      if (static_cast<int>(merged.size()) <= k) {
        target = j;
        break;
      }
      if (j == barrier) break;  // cannot jump past the barrier
    }
    if (target < 0) {
      p.blocks.push_back({});
      target = static_cast<int>(p.blocks.size()) - 1;
    }
    auto& blk = p.blocks[target];
    for (int q : gq)
      if (std::find(blk.qubits.begin(), blk.qubits.end(), q) ==
          blk.qubits.end())
        blk.qubits.push_back(q);
    std::sort(blk.qubits.begin(), blk.qubits.end());
    blk.gates.push_back(g);
  }
  return p;
}

// Renders a block as a standalone circuit on local qubit indices 0..w-1
// following the block's sorted global qubit list.
inline Circuit block_to_circuit(const Block& b) {
  Circuit c(static_cast<int>(b.qubits.size()));
  auto local = [&](int q) {
    return static_cast<int>(
        std::find(b.qubits.begin(), b.qubits.end(), q) - b.qubits.begin());
  };
  for (auto g : b.gates) {
    g.q0 = local(g.q0);
    if (g.q1 >= 0) g.q1 = local(g.q1);
    c.push(g);
  }
  return c;
}

// Splices per-block circuits (local indices) back into a full-width circuit.
inline Circuit reassemble(const Partition& p,
                          const std::vector<Circuit>& blocks) {
  if (blocks.size() != p.blocks.size())
    throw BlockMismatchError("reassemble: block count mismatch");
  Circuit out(p.width);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& blk = p.blocks[i];
    if (blocks[i].width != static_cast<int>(blk.qubits.size()))
      throw BlockMismatchError("reassemble: block width mismatch");
    for (auto g : blocks[i].gates) {
      g.q0 = blk.qubits[g.q0];
      if (g.q1 >= 0) g.q1 = blk.qubits[g.q1];
      out.push(g);
    }
  }
  return out;
}

// Removes every SWAP by relabeling the qubits of later gates.  Returns the
// clean circuit and rho such that output wire q of the input circuit carries
// what output wire rho[q] of the clean circuit carries; appending a swap
// network realizing that rewiring reproduces the input circuit.
inline std::pair<Circuit, std::vector<int>> remove_swaps(const Circuit& c) {
  std::vector<int> rho(c.width);
  std::iota(rho.begin(), rho.end(), 0);
  Circuit out(c.width);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Swap) {
      std::swap(rho[g.q0], rho[g.q1]);
      continue;
    }
    Gate h = g;
    h.q0 = rho[g.q0];
    if (g.q1 >= 0) h.q1 = rho[g.q1];
    out.push(h);
  }
  return {out, rho};
}

// Partition -> per-block tree search -> reassemble.  A block's optimized
// circuit is kept only when it does not increase the two-qubit count.
inline Circuit peephole_optimize(const Circuit& c, const PolicyParams& params,
                                 int budget, int restarts, int k, Rng& rng) {
  auto p = partition_circuit(c, k);
  std::vector<Circuit> optimized;
  optimized.reserve(p.blocks.size());
  for (const auto& blk : p.blocks) {
    Circuit local = block_to_circuit(blk);
    Circuit best = local;
    try {
      Circuit cand = optimize_with_agent(local, params, budget, restarts, rng);
      if (circuit_stats(cand).two_qubit_count <=
          circuit_stats(best).two_qubit_count)
        best = cand;
    } catch (const Error&) {
      // keep the original block
    }
    optimized.push_back(std::move(best));
  }
  return reassemble(p, optimized);
}

}  // namespace zxopt
