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
#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "zxopt/circuit.hpp"
#include "zxopt/errors.hpp"

namespace zxopt {

// Minimal-CNOT distance oracle for 4-qubit linear reversible functions.
// A 4x4 bit matrix is encoded in 16 bits, bit (r*4 + c) = entry (r, c).
// Distances come from a breadth-first search from the identity over the 12
// CNOT generators; exactly the 20160 invertible matrices are reachable.
class CnotDistanceTable {
 public:
  static constexpr int kWidth = 4;
  static constexpr std::uint8_t kUnreachable = 0xff;

  CnotDistanceTable() : dist_(1u << 16, kUnreachable) {
    std::uint16_t identity = 0;
    for (int r = 0; r < kWidth; ++r) identity |= bit(r, r);
    dist_[identity] = 0;
    std::deque<std::uint16_t> queue = {identity};
    while (!queue.empty()) {
      std::uint16_t m = queue.front();
      queue.pop_front();
      for (int c = 0; c < kWidth; ++c)
        for (int t = 0; t < kWidth; ++t) {
          if (c == t) continue;
          std::uint16_t next = apply_cnot(m, c, t);
          if (dist_[next] == kUnreachable) {
            dist_[next] = static_cast<std::uint8_t>(dist_[m] + 1);
            queue.push_back(next);
          }
        }
    }
  }

  static std::uint16_t bit(int r, int c) {
    return static_cast<std::uint16_t>(1u << (r * kWidth + c));
  }

  // Row t ^= row c.
  static std::uint16_t apply_cnot(std::uint16_t m, int c, int t) {
    std::uint16_t row_c = static_cast<std::uint16_t>((m >> (c * kWidth)) & 0xf);
    return static_cast<std::uint16_t>(m ^ (row_c << (t * kWidth)));
  }

  static std::uint16_t matrix_of(const Circuit& c) {
    if (c.width != kWidth)
      throw NotApplicableError("brute force: only width 4 is supported");
    std::uint16_t m = 0;
    for (int r = 0; r < kWidth; ++r) m |= bit(r, r);
    for (const auto& g : c.gates) {
      if (g.kind != GateKind::Cnot)
        throw NotApplicableError("brute force: circuit is not pure CNOT");
      m = apply_cnot(m, g.q0, g.q1);
    }
    return m;
  }

  int distance(std::uint16_t m) const {
    if (dist_[m] == kUnreachable)
      throw NotApplicableError("brute force: matrix is not invertible");
    return dist_[m];
  }

  int reachable_count() const {
    int n = 0;
    for (auto d : dist_)
      if (d != kUnreachable) ++n;
    return n;
  }

 private:
  std::vector<std::uint8_t> dist_;
};

inline int brute_force_cnot_count(const Circuit& c,
                                  const CnotDistanceTable& table) {
  return table.distance(CnotDistanceTable::matrix_of(c));
}

// Minimal CNOT count when the output wires may end in any permutation; the
// caller is assumed to undo the permutation for free (by relabelling, or by
// a SWAP network that is not billed).  This is the natural lower bound for
// comparisons against SWAP-removed circuit counts.
inline int brute_force_cnot_count_upto_perm(const Circuit& c,
                                            const CnotDistanceTable& table) {
  std::uint16_t m = CnotDistanceTable::matrix_of(c);
  std::array<int, CnotDistanceTable::kWidth> perm = {0, 1, 2, 3};
  int best = table.distance(m);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::uint16_t pm = 0;
    for (int r = 0; r < CnotDistanceTable::kWidth; ++r) {
      std::uint16_t row =
          static_cast<std::uint16_t>((m >> (r * CnotDistanceTable::kWidth)) & 0xf);
      pm |= static_cast<std::uint16_t>(row << (perm[r] * CnotDistanceTable::kWidth));
    }
    best = std::min(best, table.distance(pm));
  }
  return best;
}

}  // namespace zxopt
