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
#include <string>
#include <vector>

#include "zxopt/diagram.hpp"
#include "zxopt/errors.hpp"

namespace zxopt {

enum class RuleKind {
  Fuse,
  Unfuse,
  PiCommute,
  ColorChange,
  Bialgebra,
  EulerExpand,
  EulerContract,
};

inline const char* rule_name(RuleKind r) {
  switch (r) {
    case RuleKind::Fuse: return "fuse";
    case RuleKind::Unfuse: return "unfuse";
    case RuleKind::PiCommute: return "pi";
    case RuleKind::ColorChange: return "color";
    case RuleKind::Bialgebra: return "bialgebra";
    case RuleKind::EulerExpand: return "euler-expand";
    case RuleKind::EulerContract: return "euler-contract";
  }
  return "?";
}

// An applicable rewrite: rule plus anchor vertices.  `variant` distinguishes
// the two color directions of EulerExpand (0: Z-X-Z chain, 1: X-Z-X chain);
// it is 0 for every other rule.
struct Match {
  RuleKind rule;
  ZXDiagram::VertexId v0 = -1;
  ZXDiagram::VertexId v1 = -1;  // -1 when the anchor is a single vertex
  int variant = 0;

  auto tie() const { return std::tuple(static_cast<int>(rule), v0, v1, variant); }
  bool operator==(const Match& o) const { return tie() == o.tie(); }
  bool operator<(const Match& o) const { return tie() < o.tie(); }

  std::string str() const {
    std::string s = std::string(rule_name(rule)) + ":" + std::to_string(v0);
    if (v1 >= 0) s += "," + std::to_string(v1);
    if (variant) s += ";v" + std::to_string(variant);
    return s;
  }
};

namespace detail {

inline bool same_color(const Vertex& a, const Vertex& b) {
  return a.is_spider() && b.is_spider() && a.kind == b.kind;
}
inline bool opposite_color(const Vertex& a, const Vertex& b) {
  return a.is_spider() && b.is_spider() && a.kind != b.kind;
}
inline VertexKind flip(VertexKind k) {
  return k == VertexKind::Z ? VertexKind::X : VertexKind::Z;
}

// All wire ends of v as (other endpoint, kind) pairs; self-loops contribute
// two ends each.  Order is deterministic (edge-map order).
struct WireEnd {
  ZXDiagram::VertexId other;
  EdgeKind kind;
};
inline std::vector<WireEnd> wire_ends(const ZXDiagram& d,
                                      ZXDiagram::VertexId v) {
  std::vector<WireEnd> out;
  for (const auto& [k, c] : d.edges()) {
    if (k.first != v && k.second != v) continue;
    bool loop = k.first == k.second;
    ZXDiagram::VertexId other = k.first == v ? k.second : k.first;
    int mult = loop ? 2 : 1;
    for (int i = 0; i < c.simple * mult; ++i)
      out.push_back({other, EdgeKind::Simple});
    for (int i = 0; i < c.hadamard * mult; ++i)
      out.push_back({other, EdgeKind::Hadamard});
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// cleanup: identity-spider removal, opposite-color parallel-wire cancellation,
// and self-loop resolution, iterated to fixpoint.
// ---------------------------------------------------------------------------

inline ZXDiagram cleanup(ZXDiagram d) {
  bool changed = true;
  while (changed) {
    changed = false;

    // Self-loops: a simple loop drops out; a Hadamard loop adds pi.
    std::vector<ZXDiagram::VertexId> loop_verts;
    for (const auto& [k, c] : d.edges())
      if (k.first == k.second && c.total() > 0) loop_verts.push_back(k.first);
    for (auto v : loop_verts) {
      auto c = d.self_loops(v);
      if (c.simple > 0) d.remove_edges(v, v, EdgeKind::Simple, c.simple);
      if (c.hadamard > 0) {
        if (c.hadamard % 2) d.add_phase(v, Phase::pi());
        d.remove_edges(v, v, EdgeKind::Hadamard, c.hadamard);
      }
      changed = true;
    }
    if (changed) continue;

    // Opposite-color simple-edge pairs cancel mod 2.
    for (const auto& [k, c] : d.edges()) {
      if (c.simple >= 2 &&
          detail::opposite_color(d.vertex(k.first), d.vertex(k.second))) {
        d.remove_edges(k.first, k.second, EdgeKind::Simple,
                       c.simple - c.simple % 2);
        changed = true;
        break;
      }
    }
    if (changed) continue;

    // Identity spiders: zero phase, exactly two incident wire ends.
    for (const auto& [vid, v] : d.vertices()) {
      if (!v.is_spider() || !v.phase.is_zero()) continue;
      if (d.degree(vid) != 2) continue;
      auto ends = detail::wire_ends(d, vid);
      // A lone self-loop is a closed scalar loop; drop the vertex.
      if (ends.size() == 2 && ends[0].other == vid && ends[1].other == vid) {
        d.remove_vertex(vid);
        changed = true;
        break;
      }
      EdgeKind k = ends[0].kind == ends[1].kind ? EdgeKind::Simple
                                                : EdgeKind::Hadamard;
      auto a = ends[0].other, b = ends[1].other;
      d.remove_vertex(vid);
      d.add_edge(a, b, k);
      changed = true;
      break;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// enumerate_matches
// ---------------------------------------------------------------------------

inline std::vector<Match> enumerate_matches(const ZXDiagram& d) {
  std::vector<Match> out;
  const auto& verts = d.vertices();

  for (const auto& [vid, v] : verts) {
    if (!v.is_spider()) continue;
    out.push_back({RuleKind::ColorChange, vid});
    if (d.degree(vid) > 3) out.push_back({RuleKind::Unfuse, vid});
  }

  for (const auto& [k, c] : d.edges()) {
    if (k.first == k.second) continue;
    const Vertex& a = verts.at(k.first);
    const Vertex& b = verts.at(k.second);
    if (c.simple >= 1 && detail::same_color(a, b))
      out.push_back({RuleKind::Fuse, k.first, k.second});
    if (c.hadamard >= 1 && a.is_spider() && b.is_spider()) {
      out.push_back({RuleKind::EulerExpand, k.first, k.second, 0});
      out.push_back({RuleKind::EulerExpand, k.first, k.second, 1});
    }
    if (c.simple == 1 && c.hadamard == 0 && detail::opposite_color(a, b) &&
        a.phase.is_zero() && b.phase.is_zero() &&
        d.self_loops(k.first).total() == 0 &&
        d.self_loops(k.second).total() == 0) {
      // Anchor order: Z spider first.
      auto z = a.kind == VertexKind::Z ? k.first : k.second;
      auto x = a.kind == VertexKind::Z ? k.second : k.first;
      out.push_back({RuleKind::Bialgebra, z, x});
    }
  }

  // PiCommute: degree-2 pi spider adjacent (simple edge) to an opposite-color
  // spider.
  for (const auto& [vid, v] : verts) {
    if (!v.is_spider() || !v.phase.is_pi() || d.degree(vid) != 2) continue;
    for (auto w : d.neighbors(vid)) {
      if (d.edge(vid, w).simple >= 1 &&
          detail::opposite_color(v, verts.at(w)))
        out.push_back({RuleKind::PiCommute, vid, w});
    }
  }

  // EulerContract: chain a - m - b of alternating colors, all phases pi/2,
  // all three of degree 2, simple chain edges, distinct endpoints.
  for (const auto& [mid, m] : verts) {
    if (!m.is_spider() || !m.phase.is_plus_minus_half_pi()) continue;
    if (m.phase != Phase(1, 2)) continue;  // exact pi/2 chain per the rule
    if (d.degree(mid) != 2) continue;
    auto ends = detail::wire_ends(d, mid);
    if (ends.size() != 2) continue;
    auto a = ends[0].other, b = ends[1].other;
    if (a == b || a == mid || b == mid) continue;
    if (ends[0].kind != EdgeKind::Simple || ends[1].kind != EdgeKind::Simple)
      continue;
    const Vertex& va = verts.at(a);
    const Vertex& vb = verts.at(b);
    if (!detail::opposite_color(m, va) || !detail::opposite_color(m, vb))
      continue;
    if (va.phase != Phase(1, 2) || vb.phase != Phase(1, 2)) continue;
    if (d.degree(a) != 2 || d.degree(b) != 2) continue;
    out.push_back({RuleKind::EulerContract, mid});
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// apply_rewrite
// ---------------------------------------------------------------------------

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw InvalidMatchError(what);
}

inline void apply_fuse(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0) && d.has_vertex(m.v1), "fuse: missing vertex");
  require(same_color(d.vertex(m.v0), d.vertex(m.v1)), "fuse: colors differ");
  auto between = d.edge(m.v0, m.v1);
  require(between.simple >= 1, "fuse: no simple edge");
  d.add_phase(m.v0, d.vertex(m.v1).phase);
  // All parallel simple edges between the pair vanish; Hadamard edges become
  // Hadamard self-loops on the merged vertex (resolved by cleanup).
  d.remove_edges(m.v0, m.v1, EdgeKind::Simple, between.simple);
  d.merge_into(m.v0, m.v1);
}

inline void apply_unfuse(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0), "unfuse: missing vertex");
  const Vertex v = d.vertex(m.v0);
  require(v.is_spider(), "unfuse: not a spider");
  auto ends = wire_ends(d, m.v0);
  require(ends.size() > 3, "unfuse: degree <= 3");

  // Self-loop wire ends come in pairs pointing at m.v0 itself; after the
  // split each pair becomes an edge between two of the new spiders.
  std::vector<ZXDiagram::VertexId> fresh;
  for (std::size_t i = 0; i < ends.size(); ++i)
    fresh.push_back(d.add_vertex(v.kind, i == 0 ? v.phase : Phase()));
  // Complete graph on the new spiders.
  for (std::size_t i = 0; i < fresh.size(); ++i)
    for (std::size_t j = i + 1; j < fresh.size(); ++j)
      d.add_edge(fresh[i], fresh[j], EdgeKind::Simple);
  // Hand each original wire to one new spider.  Loop ends are paired in
  // wire_ends order (2k, 2k+1 within the same loop record).
  std::size_t loop_partner = ends.size();  // sentinel
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (ends[i].other == m.v0) {
      if (loop_partner == ends.size()) {
        loop_partner = i;
      } else {
        d.add_edge(fresh[loop_partner], fresh[i], ends[i].kind);
        loop_partner = ends.size();
      }
    } else {
      d.add_edge(fresh[i], ends[i].other, ends[i].kind);
    }
  }
  d.remove_vertex(m.v0);
}

inline void apply_pi_commute(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0) && d.has_vertex(m.v1), "pi: missing vertex");
  const Vertex v = d.vertex(m.v0);
  const Vertex w = d.vertex(m.v1);
  require(v.is_spider() && v.phase.is_pi() && d.degree(m.v0) == 2,
          "pi: bad pi spider");
  require(opposite_color(v, w), "pi: neighbor color");
  require(d.edge(m.v0, m.v1).simple >= 1, "pi: no simple edge");

  // The far wire of the pi spider (the end not consumed by the v0-w edge).
  auto v_ends = wire_ends(d, m.v0);
  int used = -1;
  for (std::size_t i = 0; i < v_ends.size(); ++i)
    if (v_ends[i].other == m.v1 && v_ends[i].kind == EdgeKind::Simple) {
      used = static_cast<int>(i);
      break;
    }
  require(used >= 0, "pi: stale match");
  WireEnd far = v_ends[1 - used];

  // Insert a pi spider of v's color on every other wire end of w.
  auto w_ends = wire_ends(d, m.v1);
  d.remove_vertex(m.v0);  // also removes the connecting edge and v's far wire
  bool skipped_link = false;
  std::vector<std::pair<WireEnd, ZXDiagram::VertexId>> reattach;
  for (const auto& e : w_ends) {
    if (e.other == m.v0) {
      // One of these ends was the link to the pi spider; it carries nothing
      // now.  Any further wires to v0 were parallel wires, which died with
      // v0 as well; the rule only moves the single matched wire.
      if (!skipped_link && e.kind == EdgeKind::Simple) skipped_link = true;
      continue;
    }
    reattach.push_back({e, -1});
  }
  // Rebuild w's wires with fresh pi spiders inserted.
  for (auto& [e, pi_v] : reattach) {
    EdgeKind k = e.kind;
    // Remove one instance of this wire and splice the pi spider in.
    if (e.other == m.v1) {
      // self-loop ends are handled pairwise below
      continue;
    }
    d.remove_edges(m.v1, e.other, k, 1);
    pi_v = d.add_vertex(v.kind, Phase::pi());
    d.add_edge(m.v1, pi_v, EdgeKind::Simple);
    d.add_edge(pi_v, e.other, k);
  }
  // Self-loops on w: a loop passes through w twice, so it receives a pi
  // spider at each end.
  auto loops = d.self_loops(m.v1);
  for (int i = 0; i < loops.simple; ++i) {
    d.remove_edges(m.v1, m.v1, EdgeKind::Simple, 1);
    auto p1 = d.add_vertex(v.kind, Phase::pi());
    auto p2 = d.add_vertex(v.kind, Phase::pi());
    d.add_edge(m.v1, p1, EdgeKind::Simple);
    d.add_edge(p1, p2, EdgeKind::Simple);
    d.add_edge(p2, m.v1, EdgeKind::Simple);
  }
  for (int i = 0; i < loops.hadamard; ++i) {
    d.remove_edges(m.v1, m.v1, EdgeKind::Hadamard, 1);
    auto p1 = d.add_vertex(v.kind, Phase::pi());
    auto p2 = d.add_vertex(v.kind, Phase::pi());
    d.add_edge(m.v1, p1, EdgeKind::Simple);
    d.add_edge(p1, p2, EdgeKind::Hadamard);
    d.add_edge(p2, m.v1, EdgeKind::Simple);
  }
  d.set_phase(m.v1, -w.phase);
  // The far wire of the original pi spider attaches to w on the leg the pi
  // vacated, so it carries no new pi spider -- unless it loops back onto w,
  // in which case it occupies a second leg and does.
  if (far.other == m.v0 || far.other == m.v1) {
    auto p = d.add_vertex(v.kind, Phase::pi());
    d.add_edge(m.v1, p, far.kind);
    d.add_edge(p, m.v1, EdgeKind::Simple);
  } else {
    d.add_edge(far.other, m.v1, far.kind);
  }
}

inline void apply_color_change(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0), "color: missing vertex");
  const Vertex& v = d.vertex(m.v0);
  require(v.is_spider(), "color: not a spider");
  // Toggle the kind of every non-loop incident edge (a loop passes through
  // the vertex twice, so its two Hadamards cancel).
  std::vector<std::pair<ZXDiagram::VertexId, EdgeCount>> incident;
  for (const auto& [k, c] : d.edges()) {
    if (k.first == k.second) continue;
    if (k.first == m.v0) incident.push_back({k.second, c});
    else if (k.second == m.v0) incident.push_back({k.first, c});
  }
  for (const auto& [other, c] : incident) {
    if (c.simple) d.remove_edges(m.v0, other, EdgeKind::Simple, c.simple);
    if (c.hadamard) d.remove_edges(m.v0, other, EdgeKind::Hadamard, c.hadamard);
    d.add_edge(m.v0, other, EdgeKind::Simple, c.hadamard);
    d.add_edge(m.v0, other, EdgeKind::Hadamard, c.simple);
  }
  d.set_kind(m.v0, flip(v.kind));
}

inline void apply_bialgebra(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0) && d.has_vertex(m.v1), "bialgebra: missing");
  const Vertex z = d.vertex(m.v0);
  const Vertex x = d.vertex(m.v1);
  require(z.kind == VertexKind::Z && x.kind == VertexKind::X,
          "bialgebra: anchor must be (Z, X)");
  require(z.phase.is_zero() && x.phase.is_zero(), "bialgebra: phases");
  auto between = d.edge(m.v0, m.v1);
  require(between.simple == 1 && between.hadamard == 0,
          "bialgebra: need exactly one simple edge");
  require(d.self_loops(m.v0).total() == 0 && d.self_loops(m.v1).total() == 0,
          "bialgebra: self-loop present");

  auto z_ends = wire_ends(d, m.v0);
  auto x_ends = wire_ends(d, m.v1);
  auto drop_link = [&](std::vector<WireEnd>& ends,
                       ZXDiagram::VertexId other) {
    for (std::size_t i = 0; i < ends.size(); ++i)
      if (ends[i].other == other && ends[i].kind == EdgeKind::Simple) {
        ends.erase(ends.begin() + i);
        return;
      }
    require(false, "bialgebra: stale match");
  };
  drop_link(z_ends, m.v1);
  drop_link(x_ends, m.v0);

  // New spiders: one X per external wire of the Z spider, one Z per external
  // wire of the X spider, completely bipartitely connected.
  std::vector<ZXDiagram::VertexId> new_x, new_z;
  for (std::size_t i = 0; i < z_ends.size(); ++i)
    new_x.push_back(d.add_vertex(VertexKind::X));
  for (std::size_t i = 0; i < x_ends.size(); ++i)
    new_z.push_back(d.add_vertex(VertexKind::Z));
  for (auto a : new_x)
    for (auto b : new_z) d.add_edge(a, b, EdgeKind::Simple);
  // Reattach external wires.  Wires between z and x beyond the matched edge
  // are excluded by the single-edge precondition, so every end is external.
  for (std::size_t i = 0; i < z_ends.size(); ++i)
    d.add_edge(new_x[i], z_ends[i].other, z_ends[i].kind);
  for (std::size_t i = 0; i < x_ends.size(); ++i)
    d.add_edge(new_z[i], x_ends[i].other, x_ends[i].kind);
  d.remove_vertex(m.v0);
  d.remove_vertex(m.v1);
}

inline void apply_euler_expand(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0) && d.has_vertex(m.v1), "euler: missing vertex");
  require(d.edge(m.v0, m.v1).hadamard >= 1, "euler: no Hadamard edge");
  VertexKind outer = m.variant == 0 ? VertexKind::Z : VertexKind::X;
  VertexKind inner = flip(outer);
  d.remove_edges(m.v0, m.v1, EdgeKind::Hadamard, 1);
  auto a = d.add_vertex(outer, Phase(1, 2));
  auto b = d.add_vertex(inner, Phase(1, 2));
  auto c = d.add_vertex(outer, Phase(1, 2));
  d.add_edge(m.v0, a, EdgeKind::Simple);
  d.add_edge(a, b, EdgeKind::Simple);
  d.add_edge(b, c, EdgeKind::Simple);
  d.add_edge(c, m.v1, EdgeKind::Simple);
}

inline void apply_euler_contract(ZXDiagram& d, const Match& m) {
  require(d.has_vertex(m.v0), "euler-contract: missing vertex");
  const Vertex& mid = d.vertex(m.v0);
  require(mid.is_spider() && mid.phase == Phase(1, 2) && d.degree(m.v0) == 2,
          "euler-contract: bad middle spider");
  auto ends = wire_ends(d, m.v0);
  require(ends.size() == 2 && ends[0].other != ends[1].other &&
              ends[0].other != m.v0 && ends[0].kind == EdgeKind::Simple &&
              ends[1].kind == EdgeKind::Simple,
          "euler-contract: bad chain");
  auto a = ends[0].other, b = ends[1].other;
  auto check_outer = [&](ZXDiagram::VertexId o) {
    const Vertex& vo = d.vertex(o);
    require(opposite_color(mid, vo) && vo.phase == Phase(1, 2) &&
                d.degree(o) == 2,
            "euler-contract: bad outer spider");
    auto oe = wire_ends(d, o);
    for (const auto& e : oe)
      if (e.other != m.v0) return e;
    require(false, "euler-contract: chain end missing");
    return oe[0];
  };
  WireEnd left = check_outer(a);
  WireEnd right = check_outer(b);
  int hadamard = 1 + (left.kind == EdgeKind::Hadamard) +
                 (right.kind == EdgeKind::Hadamard);
  d.remove_vertex(m.v0);
  d.remove_vertex(a);
  d.remove_vertex(b);
  d.add_edge(left.other, right.other,
             hadamard % 2 ? EdgeKind::Hadamard : EdgeKind::Simple);
}

}  // namespace detail

inline ZXDiagram apply_rewrite(const ZXDiagram& input, const Match& m) {
  ZXDiagram d = input;
  switch (m.rule) {
    case RuleKind::Fuse: detail::apply_fuse(d, m); break;
    case RuleKind::Unfuse: detail::apply_unfuse(d, m); break;
    case RuleKind::PiCommute: detail::apply_pi_commute(d, m); break;
    case RuleKind::ColorChange: detail::apply_color_change(d, m); break;
    case RuleKind::Bialgebra: detail::apply_bialgebra(d, m); break;
    case RuleKind::EulerExpand: detail::apply_euler_expand(d, m); break;
    case RuleKind::EulerContract: detail::apply_euler_contract(d, m); break;
  }
  return cleanup(std::move(d));
}

}  // namespace zxopt
