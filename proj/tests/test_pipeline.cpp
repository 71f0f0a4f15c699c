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
#include <map>

#include "test_helpers.hpp"
#include "zxopt/bench.hpp"
#include "zxopt/brute_force.hpp"
#include "zxopt/dataset.hpp"
#include "zxopt/peephole.hpp"
#include "zxopt/tensor.hpp"

using namespace zxopt;

namespace {

// Appends swaps to `c` that move wire sigma[q] to wire q, for comparing
// remove_swaps output against the original circuit.
Circuit append_permutation(Circuit c, std::vector<int> sigma) {
  for (int q = 0; q < c.width; ++q) {
    while (sigma[q] != q) {
      int r = -1;
      for (int k = 0; k < c.width; ++k)
        if (sigma[k] == q) r = k;
      c.push(Gate::swap(q, r));
      std::swap(sigma[q], sigma[r]);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("random_circuit honours exact gate counts") {
  Rng rng(11);
  auto c = random_circuit(5, 80, GateRatios{0.6, 0.2, 0.1, 0.1}, rng);
  std::map<GateKind, int> counts;
  for (const auto& g : c.gates) counts[g.kind]++;
  REQUIRE(c.gates.size() == 80);
  REQUIRE(counts[GateKind::Cnot] == 48);
  REQUIRE(counts[GateKind::H] == 16);
  REQUIRE(counts[GateKind::Rx] == 8);
  REQUIRE(counts[GateKind::Rz] == 8);

  auto pure = random_circuit(4, 80, GateRatios{1.0, 0.0, 0.0, 0.0}, rng);
  for (const auto& g : pure.gates) REQUIRE(g.kind == GateKind::Cnot);
  for (const auto& g : pure.gates) REQUIRE(g.q0 != g.q1);
}

TEST_CASE("random_circuit rejects bad inputs and is deterministic") {
  Rng rng(12);
  REQUIRE_THROWS_AS(random_circuit(5, 10, GateRatios{0.5, 0.2, 0.1, 0.1}, rng),
                    BadRatiosError);
  REQUIRE_THROWS_AS(random_circuit(1, 10, GateRatios{1.0, 0.0, 0.0, 0.0}, rng),
                    BadRatiosError);
  auto a = random_circuit(5, 40, GateRatios{}, std::uint64_t{99});
  auto b = random_circuit(5, 40, GateRatios{}, std::uint64_t{99});
  REQUIRE(to_text(a) == to_text(b));
}

TEST_CASE("assemble_circuit builds block-local wide circuits") {
  auto c = assemble_circuit(50, 2000, 5, 50, GateRatios{}, std::uint64_t{7});
  REQUIRE(c.gates.size() == 2000);
  REQUIRE(c.width == 50);
  for (const auto& g : c.gates) {
    REQUIRE(g.q0 >= 0);
    REQUIRE(g.q0 < 50);
    if (g.q1 >= 0) REQUIRE(std::abs(g.q0 - g.q1) < 5);
  }
  auto d = assemble_circuit(50, 2000, 5, 50, GateRatios{}, std::uint64_t{7});
  REQUIRE(to_text(c) == to_text(d));
}

TEST_CASE("partitioner keeps blocks narrow and order-safe") {
  auto c = assemble_circuit(50, 2000, 5, 50, GateRatios{}, std::uint64_t{13});
  auto p = partition_circuit(c, 5);
  REQUIRE(!p.blocks.empty());
  REQUIRE(p.blocks.size() <= c.gates.size());
  std::size_t total = 0;
  for (const auto& b : p.blocks) {
    REQUIRE(b.qubits.size() <= 5);
    for (const auto& g : b.gates) {
      REQUIRE(std::find(b.qubits.begin(), b.qubits.end(), g.q0) !=
              b.qubits.end());
      if (g.q1 >= 0)
        REQUIRE(std::find(b.qubits.begin(), b.qubits.end(), g.q1) !=
                b.qubits.end());
    }
    total += b.gates.size();
  }
  REQUIRE(total == c.gates.size());

  // For any two gates sharing a qubit, reassembly preserves relative order.
  std::vector<Circuit> identity_blocks;
  for (const auto& b : p.blocks) identity_blocks.push_back(block_to_circuit(b));
  auto r = reassemble(p, identity_blocks);
  std::vector<std::vector<std::string>> per_qubit_in(c.width),
      per_qubit_out(c.width);
  auto record = [](const Circuit& circ, auto& per_qubit) {
    for (const auto& g : circ.gates) {
      Circuit one(circ.width);
      one.push(g);
      std::string repr = to_text(one);
      per_qubit[g.q0].push_back(repr);
      if (g.q1 >= 0) per_qubit[g.q1].push_back(repr);
    }
  };
  record(c, per_qubit_in);
  record(r, per_qubit_out);
  for (int q = 0; q < c.width; ++q) REQUIRE(per_qubit_in[q] == per_qubit_out[q]);
}

TEST_CASE("partition and reassemble preserve the unitary") {
  Rng rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    auto c = assemble_circuit(7, 40, 3, 8, GateRatios{}, rng);
    auto p = partition_circuit(c, 3);
    std::vector<Circuit> blocks;
    for (const auto& b : p.blocks) blocks.push_back(block_to_circuit(b));
    auto r = reassemble(p, blocks);
    REQUIRE(equal_up_to_scalar(circuit_to_unitary(r), circuit_to_unitary(c),
                               1e-9));
  }
  // A circuit already within the block size forms a single block.
  Rng rng2(22);
  auto narrow = random_circuit(4, 20, GateRatios{}, rng2);
  REQUIRE(partition_circuit(narrow, 5).blocks.size() == 1);
}

TEST_CASE("cnot distance table matches its stated structure") {
  CnotDistanceTable table;
  REQUIRE(table.reachable_count() == 20160);

  Circuit id4(4);
  REQUIRE(brute_force_cnot_count(id4, table) == 0);

  Circuit cancel(4);
  cancel.push(Gate::cnot(0, 1));
  cancel.push(Gate::cnot(0, 1));
  REQUIRE(brute_force_cnot_count(cancel, table) == 0);

  // The classical 3-CNOT SWAP is optimal.
  Circuit swap(4);
  swap.push(Gate::cnot(0, 1));
  swap.push(Gate::cnot(1, 0));
  swap.push(Gate::cnot(0, 1));
  REQUIRE(brute_force_cnot_count(swap, table) == 3);

  Circuit h(4);
  h.push(Gate::h(0));
  REQUIRE_THROWS_AS(brute_force_cnot_count(h, table), NotApplicableError);
  Circuit wide(5);
  REQUIRE_THROWS_AS(brute_force_cnot_count(wide, table), NotApplicableError);
}

TEST_CASE("cnot distances are symmetric and satisfy the triangle inequality") {
  CnotDistanceTable table;
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = random_circuit(4, 1 + static_cast<int>(rng.below(12)),
                            GateRatios{1.0, 0.0, 0.0, 0.0}, rng);
    auto b = random_circuit(4, 1 + static_cast<int>(rng.below(12)),
                            GateRatios{1.0, 0.0, 0.0, 0.0}, rng);
    // The reversed circuit realizes the inverse matrix.
    Circuit a_inv(4);
    for (auto it = a.gates.rbegin(); it != a.gates.rend(); ++it)
      a_inv.push(*it);
    REQUIRE(brute_force_cnot_count(a, table) ==
            brute_force_cnot_count(a_inv, table));
    Circuit ab(4);
    for (const auto& g : a.gates) ab.push(g);
    for (const auto& g : b.gates) ab.push(g);
    REQUIRE(brute_force_cnot_count(ab, table) <=
            brute_force_cnot_count(a, table) +
                brute_force_cnot_count(b, table));
  }
}

TEST_CASE("remove_swaps strips swaps while preserving semantics") {
  SECTION("swap-free circuits are unchanged") {
    Rng rng(41);
    auto c = random_circuit(4, 20, GateRatios{}, rng);
    auto [clean, sigma] = remove_swaps(c);
    REQUIRE(to_text(clean) == to_text(c));
    for (int q = 0; q < 4; ++q) REQUIRE(sigma[q] == q);
  }
  SECTION("one trailing swap drops the two-qubit count by 3") {
    Rng rng(42);
    auto c = random_circuit(4, 20, GateRatios{}, rng);
    c.push(Gate::swap(1, 3));
    auto before = circuit_stats(c).two_qubit_count;
    auto [clean, sigma] = remove_swaps(c);
    REQUIRE(circuit_stats(clean).two_qubit_count == before - 3);
    for (const auto& g : clean.gates) REQUIRE(g.kind != GateKind::Swap);
  }
  SECTION("clean circuit plus recorded permutation equals the original") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
      auto c = random_circuit(5, 15, GateRatios{}, rng);
      // Sprinkle interior and trailing swaps.
      std::vector<Gate> gates = c.gates;
      for (int s = 0; s < 4; ++s) {
        int a = static_cast<int>(rng.below(5));
        int b = static_cast<int>(rng.below(5));
        if (a == b) continue;
        gates.insert(gates.begin() + rng.below(gates.size() + 1),
                     Gate::swap(a, b));
      }
      Circuit swapped(5, gates);
      auto [clean, rho] = remove_swaps(swapped);
      std::vector<int> inv(rho.size());
      for (std::size_t q = 0; q < rho.size(); ++q) inv[rho[q]] = q;
      auto rebuilt = append_permutation(clean, inv);
      REQUIRE(equal_up_to_scalar(circuit_to_unitary(rebuilt),
                                 circuit_to_unitary(swapped), 1e-9));
    }
  }
}

TEST_CASE("peephole pipeline preserves the unitary and never regresses") {
  auto c = assemble_circuit(8, 60, 4, 12, GateRatios{}, std::uint64_t{55});
  PolicyParams params;  // uniform policy
  Rng rng(56);
  auto out = peephole_optimize(c, params, 12, 0, 4, rng);
  REQUIRE(circuit_stats(out).two_qubit_count <=
          circuit_stats(c).two_qubit_count);
  REQUIRE(equal_up_to_scalar(circuit_to_unitary(out), circuit_to_unitary(c),
                             1e-9));
}

TEST_CASE("benchmark CSV is deterministic and well formed") {
  DatasetSpec spec;
  spec.ratios = GateRatios{1.0, 0.0, 0.0, 0.0};
  spec.width = 4;
  spec.gates = 20;
  spec.circuits = 5;
  spec.seed = 77;
  std::vector<BenchMethod> methods = {{"extract-level-1"}, {"brute-force"}};
  auto r1 = run_benchmark(spec, methods);
  auto r2 = run_benchmark(spec, methods);
  REQUIRE(r1.csv == r2.csv);
  REQUIRE(r1.csv.find("circuit_id,seed,width,gates,cnot_in") == 0);
  REQUIRE(r1.method_names.size() == 2);
  // The oracle lower-bounds the extractor on every circuit.
  REQUIRE(r1.mean[1] <= r1.mean[0] + 1e-12);
}
