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
#include <vector>

#include "zxopt/circuit.hpp"
#include "zxopt/errors.hpp"
#include "zxopt/rng.hpp"

namespace zxopt {

struct GateRatios {
  double cnot = 0.6, h = 0.2, rx = 0.1, rz = 0.1;

  void validate() const {
    for (double r : {cnot, h, rx, rz})
      if (r < 0.0) throw BadRatiosError("gate ratios must be nonnegative");
    if (std::abs(cnot + h + rx + rz - 1.0) > 1e-12)
      throw BadRatiosError("gate ratios must sum to 1");
  }
};

// Random circuit with exact multinomial gate counts: round(ratio * gates) per
// kind, any rounding remainder assigned to the kind with the largest ratio.
// CNOT operands are uniform distinct ordered pairs; rotation phases are
// uniform over {k*pi/4, k = 1..7}.
inline Circuit random_circuit(int width, int gates, const GateRatios& ratios,
                              Rng& rng) {
  ratios.validate();
  if (width < 2 && ratios.cnot > 0.0)
    throw BadRatiosError("cnot ratio requires width >= 2");

  std::array<double, 4> r = {ratios.cnot, ratios.h, ratios.rx, ratios.rz};
  std::array<int, 4> count{};
  int total = 0;
  for (int i = 0; i < 4; ++i) {
    count[i] = static_cast<int>(std::llround(r[i] * gates));
    total += count[i];
  }
  int largest = static_cast<int>(std::max_element(r.begin(), r.end()) -
                                 r.begin());
  count[largest] += gates - total;

  std::vector<Gate> pool;
  pool.reserve(gates);
  auto qubit = [&] { return static_cast<int>(rng.below(width)); };
  auto phase = [&] { return Phase(1 + static_cast<int>(rng.below(7)), 4); };
  for (int i = 0; i < count[0]; ++i) {
    int a = qubit(), b = qubit();
    while (b == a) b = qubit();
    pool.push_back(Gate::cnot(a, b));
  }
  for (int i = 0; i < count[1]; ++i) pool.push_back(Gate::h(qubit()));
  for (int i = 0; i < count[2]; ++i) pool.push_back(Gate::rx(qubit(), phase()));
  for (int i = 0; i < count[3]; ++i) pool.push_back(Gate::rz(qubit(), phase()));

  // Fisher-Yates shuffle for gate order.
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(pool[i - 1], pool[j]);
  }
  return Circuit(width, std::move(pool));
}

inline Circuit random_circuit(int width, int gates, const GateRatios& ratios,
                              std::uint64_t seed) {
  Rng rng(seed);
  return random_circuit(width, gates, ratios, rng);
}

// Wide circuit assembled from narrow blocks: repeatedly generate a block and
// place it on a uniformly chosen contiguous qubit window.
inline Circuit assemble_circuit(int width, int total_gates, int block_width,
                                int block_gates, const GateRatios& ratios,
                                Rng& rng) {
  if (block_width > width)
    throw BadRatiosError("assemble: block wider than circuit");
  Circuit out(width);
  while (static_cast<int>(out.gates.size()) < total_gates) {
    int gates = std::min(block_gates,
                         total_gates - static_cast<int>(out.gates.size()));
    auto block = random_circuit(block_width, gates, ratios, rng);
    int offset = static_cast<int>(rng.below(width - block_width + 1));
    for (auto g : block.gates) {
      g.q0 += offset;
      if (g.q1 >= 0) g.q1 += offset;
      out.push(g);
    }
  }
  return out;
}

inline Circuit assemble_circuit(int width, int total_gates, int block_width,
                                int block_gates, const GateRatios& ratios,
                                std::uint64_t seed) {
  Rng rng(seed);
  return assemble_circuit(width, total_gates, block_width, block_gates, ratios,
                          rng);
}

}  // namespace zxopt
