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
#include <map>
#include <utility>
#include <vector>

#include "zxopt/circuit.hpp"
#include "zxopt/errors.hpp"
#include "zxopt/phase.hpp"

namespace zxopt {

enum class VertexKind { Z, X, In, Out };

enum class EdgeKind { Simple, Hadamard };

struct Vertex {
  VertexKind kind = VertexKind::Z;
  Phase phase;
  int boundary_pos = -1;  // position in the input/output list, boundaries only

  bool operator==(const Vertex&) const = default;

  bool is_boundary() const {
    return kind == VertexKind::In || kind == VertexKind::Out;
  }
  bool is_spider() const { return kind == VertexKind::Z || kind == VertexKind::X; }
};

struct EdgeCount {
  int simple = 0;
  int hadamard = 0;

  int total() const { return simple + hadamard; }
  int of(EdgeKind k) const { return k == EdgeKind::Simple ? simple : hadamard; }
  int& of(EdgeKind k) { return k == EdgeKind::Simple ? simple : hadamard; }
  bool operator==(const EdgeCount&) const = default;
};

// Open multigraph of Z/X spiders with exact rational phases.  Parallel edges
// and self-loops are first-class; the global scalar is not tracked.
class ZXDiagram {
 public:
  using VertexId = int;
  using EdgeKey = std::pair<VertexId, VertexId>;  // normalized u <= v

  static EdgeKey key(VertexId u, VertexId v) {
    return u <= v ? EdgeKey{u, v} : EdgeKey{v, u};
  }

  VertexId add_vertex(VertexKind kind, Phase phase = Phase()) {
    VertexId id = next_id_++;
    verts_[id] = Vertex{kind, phase, -1};
    return id;
  }

  VertexId add_boundary(VertexKind kind, int position) {
    VertexId id = add_vertex(kind, Phase());
    verts_[id].boundary_pos = position;
    auto& list = kind == VertexKind::In ? inputs_ : outputs_;
    if (static_cast<int>(list.size()) <= position) list.resize(position + 1, -1);
    list[position] = id;
    return id;
  }

  void add_edge(VertexId u, VertexId v, EdgeKind kind, int count = 1) {
    if (count == 0) return;
    edges_[key(u, v)].of(kind) += count;
  }

  void remove_edges(VertexId u, VertexId v, EdgeKind kind, int count) {
    auto it = edges_.find(key(u, v));
    if (it == edges_.end() || it->second.of(kind) < count)
      throw Error("remove_edges: no such edges");
    it->second.of(kind) -= count;
    if (it->second.total() == 0) edges_.erase(it);
  }

  void remove_vertex(VertexId v) {
    for (auto it = edges_.begin(); it != edges_.end();) {
      if (it->first.first == v || it->first.second == v)
        it = edges_.erase(it);
      else
        ++it;
    }
    verts_.erase(v);
  }

  const Vertex& vertex(VertexId v) const { return verts_.at(v); }
  bool has_vertex(VertexId v) const { return verts_.contains(v); }
  void set_phase(VertexId v, Phase p) { verts_.at(v).phase = p; }
  void add_phase(VertexId v, Phase p) { verts_.at(v).phase += p; }
  void set_kind(VertexId v, VertexKind k) { verts_.at(v).kind = k; }

  EdgeCount edge(VertexId u, VertexId v) const {
    auto it = edges_.find(key(u, v));
    return it == edges_.end() ? EdgeCount{} : it->second;
  }
  EdgeCount self_loops(VertexId v) const { return edge(v, v); }

  // Number of incident wire ends; self-loops count twice.
  int degree(VertexId v) const {
    int d = 0;
    for (const auto& [k, c] : edges_) {
      if (k.first == v) d += c.total();
      if (k.second == v) d += c.total();
    }
    return d;
  }

  // Distinct neighbors, sorted; self not included.
  std::vector<VertexId> neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (const auto& [k, c] : edges_) {
      if (c.total() == 0) continue;
      if (k.first == v && k.second != v) out.push_back(k.second);
      if (k.second == v && k.first != v) out.push_back(k.first);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const std::map<VertexId, Vertex>& vertices() const { return verts_; }
  const std::map<EdgeKey, EdgeCount>& edges() const { return edges_; }
  const std::vector<VertexId>& inputs() const { return inputs_; }
  const std::vector<VertexId>& outputs() const { return outputs_; }

  std::size_t vertex_count() const { return verts_.size(); }

  // Total wire count, self-loops included once per loop.
  std::int64_t wire_count() const {
    std::int64_t n = 0;
    for (const auto& [k, c] : edges_) n += c.total();
    return n;
  }

  std::size_t boundary_count() const { return inputs_.size() + outputs_.size(); }

  // Rewires every edge of `v` onto `u` (used by fusion); edges between u and v
  // themselves become self-loops on u.  `v` is removed afterwards.
  void merge_into(VertexId u, VertexId v) {
    std::vector<std::pair<EdgeKey, EdgeCount>> moved;
    for (auto it = edges_.begin(); it != edges_.end();) {
      if (it->first.first == v || it->first.second == v) {
        moved.push_back(*it);
        it = edges_.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& [k, c] : moved) {
      VertexId a = k.first == v ? u : k.first;
      VertexId b = k.second == v ? u : k.second;
      add_edge(a, b, EdgeKind::Simple, c.simple);
      add_edge(a, b, EdgeKind::Hadamard, c.hadamard);
    }
    verts_.erase(v);
  }

  void check() const {
    for (const auto& [k, c] : edges_) {
      if (!verts_.contains(k.first) || !verts_.contains(k.second))
        throw Error("edge references a missing vertex");
      if (c.simple < 0 || c.hadamard < 0) throw Error("negative edge count");
    }
    auto check_boundary = [&](const std::vector<VertexId>& list, VertexKind kind) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        auto it = verts_.find(list[i]);
        if (it == verts_.end() || it->second.kind != kind)
          throw Error("boundary list entry is not a boundary vertex");
        if (!it->second.phase.is_zero()) throw Error("boundary with phase");
        if (degree(list[i]) != 1) throw Error("boundary degree != 1");
      }
    };
    check_boundary(inputs_, VertexKind::In);
    check_boundary(outputs_, VertexKind::Out);
  }

  bool operator==(const ZXDiagram& o) const {
    return verts_ == o.verts_ && edges_ == o.edges_ && inputs_ == o.inputs_ &&
           outputs_ == o.outputs_;
  }

 private:
  std::map<VertexId, Vertex> verts_;
  std::map<EdgeKey, EdgeCount> edges_;
  std::vector<VertexId> inputs_, outputs_;
  VertexId next_id_ = 0;
};

inline ZXDiagram circuit_to_diagram(const Circuit& c) {
  c.validate();
  ZXDiagram d;
  struct WireEnd {
    ZXDiagram::VertexId last;
    EdgeKind pending = EdgeKind::Simple;
  };
  std::vector<WireEnd> wire(c.width);
  for (int q = 0; q < c.width; ++q)
    wire[q] = {d.add_boundary(VertexKind::In, q), EdgeKind::Simple};

  auto append = [&](int q, VertexKind kind, Phase p) {
    auto v = d.add_vertex(kind, p);
    d.add_edge(wire[q].last, v, wire[q].pending);
    wire[q] = {v, EdgeKind::Simple};
    return v;
  };

  auto emit = [&](const Gate& g, auto&& self) -> void {
    switch (g.kind) {
      case GateKind::Cnot: {
        auto z = append(g.q0, VertexKind::Z, Phase());
        auto x = append(g.q1, VertexKind::X, Phase());
        d.add_edge(z, x, EdgeKind::Simple);
        break;
      }
      case GateKind::Cz: {
        auto a = append(g.q0, VertexKind::Z, Phase());
        auto b = append(g.q1, VertexKind::Z, Phase());
        d.add_edge(a, b, EdgeKind::Hadamard);
        break;
      }
      case GateKind::H:
        wire[g.q0].pending = wire[g.q0].pending == EdgeKind::Simple
                                 ? EdgeKind::Hadamard
                                 : EdgeKind::Simple;
        break;
      case GateKind::Rz:
        append(g.q0, VertexKind::Z, g.phase);
        break;
      case GateKind::Rx:
        append(g.q0, VertexKind::X, g.phase);
        break;
      case GateKind::Swap:
        self(Gate::cnot(g.q0, g.q1), self);
        self(Gate::cnot(g.q1, g.q0), self);
        self(Gate::cnot(g.q0, g.q1), self);
        break;
    }
  };
  for (const auto& g : c.gates) emit(g, emit);

  for (int q = 0; q < c.width; ++q) {
    auto out = d.add_boundary(VertexKind::Out, q);
    d.add_edge(wire[q].last, out, wire[q].pending);
  }
  return d;
}

}  // namespace zxopt
