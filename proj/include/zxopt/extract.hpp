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
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "zxopt/circuit.hpp"
#include "zxopt/diagram.hpp"
#include "zxopt/errors.hpp"
#include "zxopt/graphlike.hpp"

namespace zxopt {

struct ExtractionResult {
  Circuit circuit;
  int level_used = 0;
  std::vector<int> output_permutation;  // always identity; SWAPs stay explicit
};

namespace detail {

// Cancels immediately adjacent H-H pairs on the same qubit.  Extraction pads
// boundary wires with Hadamard identities, which would otherwise leave stray
// self-cancelling gates in the output.
inline Circuit cancel_adjacent_h(const Circuit& c) {
  Circuit out(c.width);
  std::vector<int> last_h(c.width, -1);  // index into out.gates, or -1
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::H && last_h[g.q0] >= 0) {
      out.gates.erase(out.gates.begin() + last_h[g.q0]);
      for (auto& idx : last_h)
        if (idx > last_h[g.q0]) --idx;
      last_h[g.q0] = -1;
      continue;
    }
    out.push(g);
    int at = static_cast<int>(out.gates.size()) - 1;
    if (g.kind == GateKind::H) {
      last_h[g.q0] = at;
    } else {
      last_h[g.q0] = -1;
      if (g.q1 >= 0) last_h[g.q1] = -1;
    }
  }
  return out;
}

// Cancels CNOT pairs with identical control/target that are adjacent after
// commuting across gates acting on disjoint qubits.
inline Circuit cancel_adjacent_cnot(const Circuit& c) {
  auto gates = c.gates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < gates.size() && !changed; ++i) {
      if (gates[i].kind != GateKind::Cnot) continue;
      for (std::size_t j = i + 1; j < gates.size(); ++j) {
        const Gate& a = gates[i];
        const Gate& b = gates[j];
        if (b.kind == GateKind::Cnot && b.q0 == a.q0 && b.q1 == a.q1) {
          gates.erase(gates.begin() + j);
          gates.erase(gates.begin() + i);
          changed = true;
          break;
        }
        bool touches = b.q0 == a.q0 || b.q0 == a.q1 ||
                       (b.q1 >= 0 && (b.q1 == a.q0 || b.q1 == a.q1));
        if (touches) break;
      }
    }
  }
  Circuit out(c.width);
  for (const auto& g : gates) out.push(g);
  return out;
}

// A SWAP commutes through any later gate by relabelling its two qubits.
// Pushing a SWAP right until it meets a CNOT on its own pair lets the two
// fuse: SWAP(a,b) followed by CNOT(c,t) with {c,t} = {a,b} equals
// CNOT(c,t) followed by CNOT(t,c), replacing cost 4 with cost 2.
inline Circuit fuse_swaps(const Circuit& c) {
  auto gates = c.gates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (gates[i].kind != GateKind::Swap) continue;
      int a = gates[i].q0;
      int b = gates[i].q1;
      auto relabel = [&](int q) { return q == a ? b : (q == b ? a : q); };
      std::size_t j = i + 1;
      for (; j < gates.size(); ++j) {
        if (gates[j].kind == GateKind::Cnot &&
            ((gates[j].q0 == a && gates[j].q1 == b) ||
             (gates[j].q0 == b && gates[j].q1 == a)))
          break;
      }
      if (j == gates.size()) continue;
      for (std::size_t k = i + 1; k < j; ++k) {
        gates[k].q0 = relabel(gates[k].q0);
        if (gates[k].q1 >= 0) gates[k].q1 = relabel(gates[k].q1);
      }
      Gate fused = Gate::cnot(gates[j].q1, gates[j].q0);
      gates.insert(gates.begin() + j + 1, fused);
      gates.erase(gates.begin() + i);
      changed = true;
      break;
    }
  }
  Circuit out(c.width);
  for (const auto& g : gates) out.push(g);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Frontier-based extraction.  Gates are collected right-to-left and reversed.
// The row-operation step requires every frontier-to-interior connection to be
// a Hadamard edge, so each input wire is padded with an identity spider
// (In -H- z -H- spider, equal to a plain wire); inputs then take part in the
// elimination as ordinary columns.  Throws ExtractionStuckError when no
// progress is possible; callers escalate the simplification level.
// ---------------------------------------------------------------------------

inline Circuit extract_circuit(const GraphLikeDiagram& input) {
  GraphLikeDiagram g = input;
  const int n = static_cast<int>(g.outputs().size());
  if (static_cast<int>(g.inputs().size()) != n)
    throw ExtractionStuckError("extract: diagram is not input/output balanced");

  // Pad input wires so every spider-to-input connection is a Hadamard edge.
  // pad_for maps each pad spider (and input boundary) to its qubit so the
  // elimination can keep qubits aligned with their inputs.
  std::map<ZXDiagram::VertexId, int> pad_for;
  for (auto in : g.inputs()) {
    auto nb = g.neighbors(in);
    if (nb.size() != 1 || g.degree(in) != 1)
      throw ExtractionStuckError("extract: bad input wire");
    auto v = nb[0];
    pad_for[in] = g.vertex(in).boundary_pos;
    if (g.vertex(v).kind == VertexKind::Out) continue;  // bare wire
    if (g.edge(in, v).simple != 1 || g.edge(in, v).hadamard != 0)
      throw ExtractionStuckError("extract: input wire is not simple");
    g.remove_edges(in, v, EdgeKind::Simple, 1);
    auto z = g.add_vertex(VertexKind::Z, Phase());
    g.add_edge(in, z, EdgeKind::Hadamard);
    g.add_edge(z, v, EdgeKind::Hadamard);
    pad_for[z] = g.vertex(in).boundary_pos;
  }

  // frontier[q]: vertex currently carrying qubit q at the output side.  Once
  // the qubit is fully peeled this becomes an input boundary.
  std::vector<ZXDiagram::VertexId> frontier(n, -1);
  auto qubit_of = [&](ZXDiagram::VertexId v) {
    for (int q = 0; q < n; ++q)
      if (frontier[q] == v) return q;
    return -1;
  };
  for (int q = 0; q < n; ++q) {
    auto out = g.outputs()[q];
    auto nb = g.neighbors(out);
    if (nb.size() != 1 || g.degree(out) != 1)
      throw ExtractionStuckError("extract: bad output wire");
    auto v = nb[0];
    if (g.edge(out, v).simple != 1 || g.edge(out, v).hadamard != 0)
      throw ExtractionStuckError("extract: output wire is not simple");
    if (qubit_of(v) >= 0) {
      // Two outputs share a spider; splice identity pads so each qubit gets
      // its own frontier vertex.
      g.remove_edges(out, v, EdgeKind::Simple, 1);
      auto z1 = g.add_vertex(VertexKind::Z, Phase());
      auto z2 = g.add_vertex(VertexKind::Z, Phase());
      g.add_edge(out, z1, EdgeKind::Simple);
      g.add_edge(z1, z2, EdgeKind::Hadamard);
      g.add_edge(z2, v, EdgeKind::Hadamard);
      v = z1;
    }
    frontier[q] = v;
  }

  auto is_input = [&](ZXDiagram::VertexId v) {
    return g.vertex(v).kind == VertexKind::In;
  };

  std::vector<Gate> rev;  // circuit suffix, in reverse order

  int guard = 16 * static_cast<int>(g.vertex_count()) + 64;
  while (guard-- > 0) {
    // Phases on frontier spiders leave as Z rotations.
    for (int q = 0; q < n; ++q) {
      auto v = frontier[q];
      if (is_input(v)) continue;
      Phase p = g.vertex(v).phase;
      if (!p.is_zero()) {
        rev.push_back(Gate::rz(q, p));
        g.set_phase(v, Phase());
      }
    }
    // Hadamard edges within the frontier leave as CZ gates.
    for (int qa = 0; qa < n; ++qa)
      for (int qb = qa + 1; qb < n; ++qb) {
        if (is_input(frontier[qa]) || is_input(frontier[qb])) continue;
        if (g.edge(frontier[qa], frontier[qb]).hadamard) {
          g.remove_edges(frontier[qa], frontier[qb], EdgeKind::Hadamard, 1);
          rev.push_back(Gate::cz(qa, qb));
        }
      }

    // Collect the non-frontier neighborhood (interior spiders and inputs).
    auto column_neighbors = [&](ZXDiagram::VertexId v) {
      std::vector<ZXDiagram::VertexId> res;
      for (auto w : g.neighbors(v)) {
        if (g.vertex(w).kind == VertexKind::Out) continue;
        if (qubit_of(w) >= 0) continue;
        res.push_back(w);
      }
      return res;
    };
    std::vector<ZXDiagram::VertexId> columns;
    for (int q = 0; q < n; ++q) {
      if (is_input(frontier[q])) continue;
      auto cn = column_neighbors(frontier[q]);
      columns.insert(columns.end(), cn.begin(), cn.end());
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    if (columns.empty()) break;

    // Advances the frontier along every row with a single remaining
    // neighbor; returns whether any advance happened.  A row normally only
    // steps onto its own qubit's input pad; misaligned input advances are a
    // last resort so the final permutation stays the identity whenever
    // possible.
    auto try_advance = [&](bool allow_misaligned) {
      bool advanced = false;
      for (int q = 0; q < n; ++q) {
        auto v = frontier[q];
        if (is_input(v)) continue;
        auto cn = column_neighbors(v);
        if (cn.size() != 1) continue;
        auto w = cn[0];
        auto pad = pad_for.find(w);
        if (pad != pad_for.end() && pad->second != q) {
          if (!allow_misaligned) continue;
        }
        bool shared = false;
        for (int p = 0; p < n; ++p)
          if (frontier[p] != v && !is_input(frontier[p]) &&
              g.edge(frontier[p], w).hadamard)
            shared = true;
        if (shared) continue;
        rev.push_back(Gate::h(q));
        g.remove_edges(v, w, EdgeKind::Hadamard, 1);
        g.remove_vertex(v);
        frontier[q] = w;
        advanced = true;
      }
      return advanced;
    };

    // Rows that are already down to one neighbor advance for free, without
    // any elimination.
    if (try_advance(false)) continue;

    // F2 biadjacency, one row per active frontier qubit.
    std::vector<int> rows;
    for (int q = 0; q < n; ++q)
      if (!is_input(frontier[q])) rows.push_back(q);
    const std::size_t nr = rows.size(), nc = columns.size();
    std::vector<std::vector<int>> m(nr, std::vector<int>(nc, 0));
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        m[r][c] = g.edge(frontier[rows[r]], columns[c]).hadamard ? 1 : 0;

    // Row operations; each one is exactly one CNOT on the frontier.
    std::vector<std::pair<int, int>> row_ops;  // (source, target)
    auto add_row = [&](std::size_t src, std::size_t dst) {
      for (std::size_t c = 0; c < nc; ++c) m[dst][c] ^= m[src][c];
      row_ops.push_back({static_cast<int>(src), static_cast<int>(dst)});
    };

    // Cheapest-singleton search: find the row subset whose sum has exactly
    // one remaining neighbor, minimizing row additions plus the cost of
    // clearing that neighbor's column; landing on another qubit's input pad
    // is priced at the three CNOTs a SWAP would cost later.  Subsets are
    // enumerated in Gray-code order, so this is deterministic.
    bool reduced = false;
    if (nr >= 1 && nr <= 12) {
      std::size_t best_cost = static_cast<std::size_t>(-1);
      std::size_t best_r = nr, best_c = nc;
      std::uint32_t best_set = 0;
      // Two-column rows: clearing one of their columns leaves them a
      // singleton, which is priced below when it would land on a foreign
      // input pad (a future SWAP).
      std::vector<std::size_t> wrow(nr, 0);
      std::vector<std::array<std::size_t, 2>> pair_cols(nr, {nc, nc});
      for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c)
          if (m[r][c]) {
            if (wrow[r] < 2) pair_cols[r][wrow[r]] = c;
            ++wrow[r];
          }
      }
      std::vector<int> acc(nc, 0);
      std::uint32_t gray = 0;
      for (std::uint32_t it = 1; it < (1u << nr); ++it) {
        std::uint32_t next = it ^ (it >> 1);
        std::size_t flipped = 0;
        for (std::uint32_t diff = next ^ gray; !(diff & 1); diff >>= 1)
          ++flipped;
        gray = next;
        for (std::size_t c = 0; c < nc; ++c) acc[c] ^= m[flipped][c];
        std::size_t w = 0, at = nc;
        for (std::size_t c = 0; c < nc && w < 2; ++c)
          if (acc[c]) { ++w; at = c; }
        if (w != 1) continue;
        std::size_t adds = 0;
        for (std::uint32_t b = gray; b; b &= b - 1) ++adds;
        --adds;  // one subset member becomes the target, the rest are added
        auto pad = pad_for.find(columns[at]);
        for (std::size_t r = 0; r < nr; ++r) {
          if (!(gray & (1u << r))) continue;
          std::size_t cost = adds;
          for (std::size_t r2 = 0; r2 < nr; ++r2)
            if (r2 != r && m[r2][at]) ++cost;  // clear the column afterwards
          if (pad != pad_for.end() && pad->second != rows[r])
            continue;  // never land on another qubit's input pad
          for (std::size_t r2 = 0; r2 < nr; ++r2) {
            if (r2 == r || wrow[r2] != 2 || !m[r2][at]) continue;
            std::size_t other =
                pair_cols[r2][0] == at ? pair_cols[r2][1] : pair_cols[r2][0];
            auto p2 = pad_for.find(columns[other]);
            if (p2 != pad_for.end() && p2->second != rows[r2]) cost += 3;
          }
          if (cost < best_cost) {
            best_cost = cost;
            best_r = r;
            best_c = at;
            best_set = gray;
          }
        }
      }
      if (best_r < nr) {
        for (std::size_t r = 0; r < nr; ++r)
          if (r != best_r && (best_set & (1u << r))) add_row(r, best_r);
        for (std::size_t r = 0; r < nr; ++r)
          if (r != best_r && m[r][best_c]) add_row(best_r, r);
        reduced = true;
      }
    }

    if (!reduced) {
      // Fallback: Gauss-Jordan with free pivoting (leftmost nonzero column,
      // sparsest not-yet-used row, topmost on ties).
      std::vector<char> used(nr, 0);
      for (std::size_t col = 0; col < nc; ++col) {
        std::size_t pr = nr, best = nc + 1;
        for (std::size_t r = 0; r < nr; ++r) {
          if (used[r] || !m[r][col]) continue;
          std::size_t w = 0;
          for (std::size_t c = 0; c < nc; ++c) w += m[r][c];
          if (w < best) { best = w; pr = r; }
        }
        if (pr == nr) continue;
        used[pr] = 1;
        for (std::size_t r = 0; r < nr; ++r)
          if (r != pr && m[r][col]) add_row(pr, r);
      }
    }

    // Mirror the row operations on the diagram and emit the CNOTs.
    for (auto [src, dst] : row_ops) {
      auto vs = frontier[rows[src]], vd = frontier[rows[dst]];
      for (auto w : column_neighbors(vs)) detail::toggle_hadamard(g, vd, w);
      rev.push_back(Gate::cnot(rows[dst], rows[src]));
    }

    // Advance the frontier along rows with a single remaining neighbor.
    if (!try_advance(false) && !try_advance(true))
      throw ExtractionStuckError("extract: no unit row to advance");
  }
  if (guard <= 0) throw ExtractionStuckError("extract: no progress");

  // All qubits must now rest directly on input boundaries.
  std::vector<int> source(n, -1);  // qubit q is fed by input source[q]
  for (int q = 0; q < n; ++q) {
    if (!is_input(frontier[q]))
      throw ExtractionStuckError("extract: frontier not reduced to inputs");
    source[q] = g.vertex(frontier[q]).boundary_pos;
  }
  std::vector<int> seen(n, 0);
  for (int q = 0; q < n; ++q) {
    if (source[q] < 0 || source[q] >= n || seen[source[q]])
      throw ExtractionStuckError("extract: input matching is not a bijection");
    seen[source[q]] = 1;
  }

  // Realize the input permutation with SWAPs at the start of the circuit.
  std::vector<Gate> prefix;
  {
    std::vector<int> perm = source;  // qubit q currently carries input perm[q]
    for (int q = 0; q < n; ++q) {
      while (perm[q] != q) {
        int r = -1;
        for (int k = 0; k < n; ++k)
          if (perm[k] == q) r = k;
        prefix.push_back(Gate::swap(q, r));
        std::swap(perm[q], perm[r]);
      }
    }
    std::reverse(prefix.begin(), prefix.end());
  }

  Circuit out(n);
  for (const auto& gt : prefix) out.push(gt);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) out.push(*it);
  out = detail::cancel_adjacent_h(out);
  if (!prefix.empty()) {
    out = detail::cancel_adjacent_cnot(detail::fuse_swaps(out));
  }
  bool has_swap = std::any_of(out.gates.begin(), out.gates.end(), [](const Gate& g) {
    return g.kind == GateKind::Swap;
  });
  if (has_swap) {
    // A SWAP costs three two-qubit gates; expanding the prefix into CNOT
    // triples lets them cancel against the elimination gates that follow.
    for (int orient = 0; orient < 2; ++orient) {
      Circuit expanded(n);
      for (const auto& gt : out.gates) {
        if (gt.kind == GateKind::Swap) {
          int a = orient ? gt.q1 : gt.q0;
          int b = orient ? gt.q0 : gt.q1;
          expanded.push(Gate::cnot(a, b));
          expanded.push(Gate::cnot(b, a));
          expanded.push(Gate::cnot(a, b));
        } else {
          expanded.push(gt);
        }
      }
      expanded = detail::cancel_adjacent_cnot(expanded);
      if (circuit_stats(expanded).two_qubit_count <
          circuit_stats(out).two_qubit_count)
        out = expanded;
    }
  }
  return out;
}

inline ExtractionResult extract_with_levels(const ZXDiagram& d) {
  auto base = to_graph_like(d);
  std::string last_error = "no level attempted";
  for (int level = 1; level <= 5; ++level) {
    try {
      auto g = simplify_level(base, level);
      ExtractionResult res;
      res.circuit = extract_circuit(g);
      res.level_used = level;
      res.output_permutation.resize(d.outputs().size());
      std::iota(res.output_permutation.begin(), res.output_permutation.end(),
                0);
      return res;
    } catch (const ExtractionStuckError& e) {
      last_error = e.what();
    }
  }
  throw ExtractionFailedError("extraction failed at every level: " +
                              last_error);
}

}  // namespace zxopt
