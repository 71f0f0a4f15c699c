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

#include <array>

#include "zxopt/circuit.hpp"
#include "zxopt/diagram.hpp"

namespace zxopt {

inline constexpr int kFeatureDim = 24;

using FeatureVector = std::array<double, kFeatureDim>;

// Eight base circuit/diagram statistics, followed by the same eight divided
// by the total gate count and by the qubit count.  Zero denominators yield 0.
inline FeatureVector featurize(const Circuit& c, const ZXDiagram& d) {
  CircuitStats s = circuit_stats(c);
  double edges = 0;
  for (const auto& [k, cnt] : d.edges()) edges += cnt.total();
  std::array<double, 8> base = {
      static_cast<double>(s.gate_count),     static_cast<double>(s.t_count),
      static_cast<double>(s.clifford_count), static_cast<double>(s.two_qubit_count),
      static_cast<double>(s.h_count),        static_cast<double>(s.depth),
      static_cast<double>(s.depth_cz),       edges,
  };
  FeatureVector f{};
  double gates = static_cast<double>(s.gate_count);
  double qubits = static_cast<double>(c.width);
  for (int i = 0; i < 8; ++i) {
    f[i] = base[i];
    f[8 + i] = gates > 0 ? base[i] / gates : 0.0;
    f[16 + i] = qubits > 0 ? base[i] / qubits : 0.0;
  }
  return f;
}

}  // namespace zxopt
