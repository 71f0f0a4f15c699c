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
#include <vector>

#include "zxopt/diagram.hpp"
#include "zxopt/errors.hpp"

namespace zxopt {

// A graph-like diagram reuses ZXDiagram storage but upholds: only Z spiders,
// spider-spider edges are Hadamard, boundary wires are Simple, no self-loops
// or parallel edges.
using GraphLikeDiagram = ZXDiagram;

inline bool is_graph_like(const ZXDiagram& d) {
  for (const auto& [id, v] : d.vertices())
    if (v.kind == VertexKind::X) return false;
  for (const auto& [k, c] : d.edges()) {
    if (k.first == k.second) return false;
    if (c.total() > 1) return false;
    bool boundary = d.vertex(k.first).is_boundary() ||
                    d.vertex(k.second).is_boundary();
    if (boundary && c.hadamard != 0) return false;
    if (!boundary && c.simple != 0) return false;
  }
  return true;
}

inline GraphLikeDiagram to_graph_like(const ZXDiagram& input) {
  ZXDiagram d = input;

  // Color-change every X spider to Z, toggling incident edge kinds.
  std::vector<ZXDiagram::VertexId> xs;
  for (const auto& [id, v] : d.vertices())
    if (v.kind == VertexKind::X) xs.push_back(id);
  for (auto vid : xs) {
    std::vector<std::pair<ZXDiagram::VertexId, EdgeCount>> incident;
    for (const auto& [k, c] : d.edges()) {
      if (k.first == k.second) continue;
      if (k.first == vid) incident.push_back({k.second, c});
      else if (k.second == vid) incident.push_back({k.first, c});
    }
    for (const auto& [other, c] : incident) {
      if (c.simple) d.remove_edges(vid, other, EdgeKind::Simple, c.simple);
      if (c.hadamard) d.remove_edges(vid, other, EdgeKind::Hadamard, c.hadamard);
      d.add_edge(vid, other, EdgeKind::Simple, c.hadamard);
      d.add_edge(vid, other, EdgeKind::Hadamard, c.simple);
    }
    d.set_kind(vid, VertexKind::Z);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // Self-loops: simple drop; Hadamard folds into a pi phase.
    std::vector<ZXDiagram::VertexId> loops;
    for (const auto& [k, c] : d.edges())
      if (k.first == k.second && c.total() > 0) loops.push_back(k.first);
    for (auto v : loops) {
      auto c = d.self_loops(v);
      if (c.simple) d.remove_edges(v, v, EdgeKind::Simple, c.simple);
      if (c.hadamard) {
        if (c.hadamard % 2) d.add_phase(v, Phase::pi());
        d.remove_edges(v, v, EdgeKind::Hadamard, c.hadamard);
      }
      changed = true;
    }
    if (changed) continue;

    for (const auto& [kref, cref] : d.edges()) {
      const auto k = kref;
      const auto c = cref;  // copies: the mutations below erase map entries
      const Vertex& a = d.vertex(k.first);
      const Vertex& b = d.vertex(k.second);
      if (!a.is_spider() || !b.is_spider()) continue;
      // Fuse spiders joined by a simple edge.
      if (c.simple >= 1) {
        d.add_phase(k.first, b.phase);
        d.remove_edges(k.first, k.second, EdgeKind::Simple, c.simple);
        // Extra parallel simple wires fuse into self-loops; Hadamard wires
        // between the pair become Hadamard self-loops.
        d.add_edge(k.first, k.first, EdgeKind::Simple, c.simple - 1);
        d.merge_into(k.first, k.second);
        changed = true;
        break;
      }
      // Parallel Hadamard edges between Z spiders cancel mod 2.
      if (c.hadamard >= 2) {
        d.remove_edges(k.first, k.second, EdgeKind::Hadamard,
                       c.hadamard - c.hadamard % 2);
        changed = true;
        break;
      }
    }
  }

  // Normalize boundary wires to Simple by inserting identity spiders, and
  // split spider-boundary parallel wires.
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& [id, v] : d.vertices()) {
      if (!v.is_boundary()) continue;
      auto ends = [&] {
        std::vector<std::pair<ZXDiagram::VertexId, EdgeKind>> e;
        for (const auto& [k, c] : d.edges()) {
          if (k.first != id && k.second != id) continue;
          auto other = k.first == id ? k.second : k.first;
          for (int i = 0; i < c.simple; ++i) e.push_back({other, EdgeKind::Simple});
          for (int i = 0; i < c.hadamard; ++i)
            e.push_back({other, EdgeKind::Hadamard});
        }
        return e;
      }();
      if (ends.size() != 1) throw Error("to_graph_like: boundary degree != 1");
      auto [other, kind] = ends[0];
      if (kind == EdgeKind::Hadamard) {
        d.remove_edges(id, other, EdgeKind::Hadamard, 1);
        auto z = d.add_vertex(VertexKind::Z);
        d.add_edge(id, z, EdgeKind::Simple);
        d.add_edge(z, other, EdgeKind::Hadamard);
        changed = true;
        break;
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Local complementation and pivoting on graph-like diagrams.
// ---------------------------------------------------------------------------

namespace detail {

inline bool interior(const GraphLikeDiagram& g, ZXDiagram::VertexId v) {
  if (!g.vertex(v).is_spider()) return false;
  for (auto n : g.neighbors(v))
    if (g.vertex(n).is_boundary()) return false;
  return true;
}

inline void toggle_hadamard(GraphLikeDiagram& g, ZXDiagram::VertexId a,
                            ZXDiagram::VertexId b) {
  if (g.edge(a, b).hadamard)
    g.remove_edges(a, b, EdgeKind::Hadamard, 1);
  else
    g.add_edge(a, b, EdgeKind::Hadamard);
}

}  // namespace detail

inline GraphLikeDiagram local_complement(const GraphLikeDiagram& input,
                                         ZXDiagram::VertexId v) {
  GraphLikeDiagram g = input;
  if (!g.has_vertex(v) || !detail::interior(g, v) ||
      !g.vertex(v).phase.is_plus_minus_half_pi())
    throw NotApplicableError("local_complement: preconditions not met");
  Phase delta = -g.vertex(v).phase;  // -pi/2 for +pi/2, +pi/2 for -pi/2
  auto nbrs = g.neighbors(v);
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j)
      detail::toggle_hadamard(g, nbrs[i], nbrs[j]);
  for (auto n : nbrs) g.add_phase(n, delta);
  g.remove_vertex(v);
  return g;
}

inline GraphLikeDiagram pivot(const GraphLikeDiagram& input,
                              ZXDiagram::VertexId u, ZXDiagram::VertexId v) {
  GraphLikeDiagram g = input;
  if (!g.has_vertex(u) || !g.has_vertex(v) || !detail::interior(g, u) ||
      !detail::interior(g, v) || g.edge(u, v).hadamard != 1)
    throw NotApplicableError("pivot: preconditions not met");
  Phase pu = g.vertex(u).phase, pv = g.vertex(v).phase;
  if (!(pu.is_zero() || pu.is_pi()) || !(pv.is_zero() || pv.is_pi()))
    throw NotApplicableError("pivot: phases not in {0, pi}");

  auto nu = g.neighbors(u), nv = g.neighbors(v);
  std::vector<ZXDiagram::VertexId> only_u, only_v, common;
  for (auto n : nu) {
    if (n == v) continue;
    if (std::binary_search(nv.begin(), nv.end(), n))
      common.push_back(n);
    else
      only_u.push_back(n);
  }
  for (auto n : nv) {
    if (n == u) continue;
    if (!std::binary_search(nu.begin(), nu.end(), n)) only_v.push_back(n);
  }
  auto toggle_between = [&](const std::vector<ZXDiagram::VertexId>& a,
                            const std::vector<ZXDiagram::VertexId>& b) {
    for (auto x : a)
      for (auto y : b)
        if (x != y) detail::toggle_hadamard(g, x, y);
  };
  toggle_between(only_u, only_v);
  toggle_between(only_u, common);
  toggle_between(only_v, common);
  for (auto n : only_u) g.add_phase(n, pv);
  for (auto n : only_v) g.add_phase(n, pu);
  for (auto n : common) g.add_phase(n, pu + pv + Phase::pi());
  g.remove_vertex(u);
  g.remove_vertex(v);
  return g;
}

// ---------------------------------------------------------------------------
// Degree-bounded simplification levels.
// ---------------------------------------------------------------------------

namespace detail {

inline int level_degree_bound(int level) {
  switch (level) {
    case 1: return 2;
    case 2: return 3;
    case 3: return 4;
    default: return -1;  // unbounded
  }
}

// Removes one interior phase-0 degree-2 spider (an identity between two
// Hadamard wires: H then H is a plain wire, so its endpoints fuse).  Returns
// whether a removal happened.
inline bool remove_identity(GraphLikeDiagram& g) {
  for (const auto& [vid, v] : g.vertices()) {
    if (!v.is_spider() || !v.phase.is_zero() || !interior(g, vid)) continue;
    auto nb = g.neighbors(vid);
    if (nb.size() != 2 || g.degree(vid) != 2) continue;
    if (g.edge(vid, nb[0]).hadamard != 1 || g.edge(vid, nb[1]).hadamard != 1)
      continue;
    auto a = nb[0], b = nb[1];
    g.remove_vertex(vid);
    g.add_edge(a, b, EdgeKind::Simple);
    g = to_graph_like(g);  // fuse the endpoints and re-normalize
    return true;
  }
  return false;
}

// One fixpoint pass of degree-bounded local complementation, with
// identity-spider cleanup.  Pivoting is only enabled at the unbounded
// setting (bound < 0); for a pivot both endpoints are interior Pauli
// spiders.
inline void simplify_interior(GraphLikeDiagram& g, int bound) {
  bool changed = true;
  while (changed) {
    changed = false;
    if (remove_identity(g)) {
      changed = true;
      continue;
    }
    for (const auto& [vid, v] : g.vertices()) {
      if (!v.is_spider() || !interior(g, vid)) continue;
      int deg = static_cast<int>(g.neighbors(vid).size());
      if (bound >= 0 && deg > bound) continue;
      if (v.phase.is_plus_minus_half_pi()) {
        g = local_complement(g, vid);
        changed = true;
        break;
      }
      if (bound < 0 && (v.phase.is_zero() || v.phase.is_pi())) {
        for (auto w : g.neighbors(vid)) {
          const Vertex& vw = g.vertex(w);
          if (!vw.is_spider() || !interior(g, w)) continue;
          if (!(vw.phase.is_zero() || vw.phase.is_pi())) continue;
          g = pivot(g, vid, w);
          changed = true;
          break;
        }
        if (changed) break;
      }
    }
  }
}

// Boundary pivoting: makes a boundary-adjacent partner interior by splicing
// two Hadamard identity spiders into its boundary wire, then pivots.
inline void simplify_boundary(GraphLikeDiagram& g, bool multi_boundary) {
  bool changed = true;
  int guard = 4 * static_cast<int>(g.vertex_count()) + 64;
  while (changed && guard-- > 0) {
    changed = false;
    simplify_interior(g, -1);
    for (const auto& [uid, u] : g.vertices()) {
      if (!u.is_spider() || !interior(g, uid)) continue;
      if (!(u.phase.is_zero() || u.phase.is_pi())) continue;
      for (auto w : g.neighbors(uid)) {
        const Vertex& vw = g.vertex(w);
        if (!vw.is_spider() || interior(g, w)) continue;
        if (!(vw.phase.is_zero() || vw.phase.is_pi())) continue;
        std::vector<ZXDiagram::VertexId> boundary_wires;
        for (auto b : g.neighbors(w))
          if (g.vertex(b).is_boundary()) boundary_wires.push_back(b);
        if (boundary_wires.size() != 1 && !multi_boundary) continue;
        // Make w interior by splicing two Hadamard identity spiders into
        // each of its boundary wires, then pivot the pair away.
        for (auto b : boundary_wires) {
          g.remove_edges(w, b, EdgeKind::Simple, 1);
          auto z1 = g.add_vertex(VertexKind::Z);
          auto z2 = g.add_vertex(VertexKind::Z);
          g.add_edge(w, z1, EdgeKind::Hadamard);
          g.add_edge(z1, z2, EdgeKind::Hadamard);
          g.add_edge(z2, b, EdgeKind::Simple);
        }
        g = pivot(g, uid, w);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
}

}  // namespace detail

inline GraphLikeDiagram simplify_level(const GraphLikeDiagram& input,
                                       int level) {
  if (level < 1 || level > 5) throw Error("simplify_level: level out of range");
  GraphLikeDiagram g = input;
  if (level <= 3) {
    detail::simplify_interior(g, detail::level_degree_bound(level));
  } else {
    detail::simplify_boundary(g, /*multi_boundary=*/level >= 5);
  }
  return g;
}

}  // namespace zxopt
