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
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "zxopt/errors.hpp"
#include "zxopt/phase.hpp"

namespace zxopt {

enum class GateKind { Cnot, Cz, H, Rz, Rx, Swap };

struct Gate {
  GateKind kind;
  int q0 = 0;      // control for Cnot; the qubit for single-qubit gates
  int q1 = -1;     // target / second operand, -1 for single-qubit gates
  Phase phase;     // Rz/Rx only

  static Gate cnot(int c, int t) { return {GateKind::Cnot, c, t, Phase()}; }
  static Gate cz(int a, int b) { return {GateKind::Cz, a, b, Phase()}; }
  static Gate h(int q) { return {GateKind::H, q, -1, Phase()}; }
  static Gate rz(int q, Phase p) { return {GateKind::Rz, q, -1, p}; }
  static Gate rx(int q, Phase p) { return {GateKind::Rx, q, -1, p}; }
  static Gate swap(int a, int b) { return {GateKind::Swap, a, b, Phase()}; }

  bool two_qubit() const {
    return kind == GateKind::Cnot || kind == GateKind::Cz ||
           kind == GateKind::Swap;
  }

  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int width = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int w) : width(w) {}
  Circuit(int w, std::vector<Gate> g) : width(w), gates(std::move(g)) {
    validate();
  }

  void push(const Gate& g) {
    gates.push_back(g);
    validate_gate(g);
  }

  void validate() const {
    for (const auto& g : gates) validate_gate(g);
  }

  bool operator==(const Circuit&) const = default;

 private:
  void validate_gate(const Gate& g) const {
    if (g.q0 < 0 || g.q0 >= width) throw Error("gate operand out of range");
    if (g.two_qubit()) {
      if (g.q1 < 0 || g.q1 >= width) throw Error("gate operand out of range");
      if (g.q0 == g.q1) throw Error("two-qubit gate with equal operands");
    }
  }
};

struct CircuitStats {
  std::int64_t gate_count = 0;
  std::int64_t t_count = 0;
  std::int64_t clifford_count = 0;
  std::int64_t two_qubit_count = 0;  // SWAP counts as 3
  std::int64_t h_count = 0;
  std::int64_t depth = 0;
  std::int64_t depth_cz = 0;
};

inline CircuitStats circuit_stats(const Circuit& c) {
  CircuitStats s;
  s.gate_count = static_cast<std::int64_t>(c.gates.size());
  std::vector<std::int64_t> level(c.width, 0), level_cz(c.width, 0);
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::Cnot:
      case GateKind::Cz:
        s.two_qubit_count += 1;
        s.clifford_count += 1;
        break;
      case GateKind::Swap:
        s.two_qubit_count += 3;
        s.clifford_count += 1;
        break;
      case GateKind::H:
        s.h_count += 1;
        s.clifford_count += 1;
        break;
      case GateKind::Rz:
      case GateKind::Rx:
        if (g.phase.is_odd_quarter()) s.t_count += 1;
        if (g.phase.is_clifford()) s.clifford_count += 1;
        break;
    }
    if (g.two_qubit()) {
      std::int64_t l = std::max(level[g.q0], level[g.q1]) + 1;
      level[g.q0] = level[g.q1] = l;
      std::int64_t lz = std::max(level_cz[g.q0], level_cz[g.q1]) + 1;
      level_cz[g.q0] = level_cz[g.q1] = lz;
    } else {
      level[g.q0] += 1;
    }
  }
  for (int q = 0; q < c.width; ++q) {
    s.depth = std::max(s.depth, level[q]);
    s.depth_cz = std::max(s.depth_cz, level_cz[q]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Text format: `qubits N` header, then one gate per line:
//   cnot c t | cz a b | h q | rz q num/den | rx q num/den | swap a b
// Phases are reduced fractions of pi. '#' starts a comment.
// ---------------------------------------------------------------------------

inline std::string to_text(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.width << "\n";
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::Cnot: os << "cnot " << g.q0 << " " << g.q1; break;
      case GateKind::Cz: os << "cz " << g.q0 << " " << g.q1; break;
      case GateKind::H: os << "h " << g.q0; break;
      case GateKind::Rz: os << "rz " << g.q0 << " " << g.phase.str(); break;
      case GateKind::Rx: os << "rx " << g.q0 << " " << g.phase.str(); break;
      case GateKind::Swap: os << "swap " << g.q0 << " " << g.q1; break;
    }
    os << "\n";
  }
  return os.str();
}

inline Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  Circuit c;
  bool have_header = false;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (!have_header) {
      if (op != "qubits") fail("expected `qubits N` header");
      if (!(ls >> c.width) || c.width <= 0) fail("bad qubit count");
      have_header = true;
      continue;
    }
    auto read_qubit = [&]() {
      int q;
      if (!(ls >> q) || q < 0 || q >= c.width) fail("bad qubit index");
      return q;
    };
    auto read_phase = [&]() {
      std::string p;
      if (!(ls >> p)) fail("missing phase");
      return Phase::parse(p);
    };
    try {
      if (op == "cnot") {
        int a = read_qubit(), b = read_qubit();
        c.push(Gate::cnot(a, b));
      } else if (op == "cz") {
        int a = read_qubit(), b = read_qubit();
        c.push(Gate::cz(a, b));
      } else if (op == "h") {
        c.push(Gate::h(read_qubit()));
      } else if (op == "rz") {
        int q = read_qubit();
        c.push(Gate::rz(q, read_phase()));
      } else if (op == "rx") {
        int q = read_qubit();
        c.push(Gate::rx(q, read_phase()));
      } else if (op == "swap") {
        int a = read_qubit(), b = read_qubit();
        c.push(Gate::swap(a, b));
      } else {
        fail("unknown gate `" + op + "`");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
    std::string rest;
    if (ls >> rest) fail("trailing token `" + rest + "`");
  }
  if (!have_header) throw ParseError("missing `qubits N` header");
  return c;
}

}  // namespace zxopt
