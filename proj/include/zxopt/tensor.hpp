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
#include <complex>
#include <map>
#include <vector>

#include "zxopt/circuit.hpp"
#include "zxopt/diagram.hpp"
#include "zxopt/errors.hpp"

namespace zxopt {

using Complex = std::complex<double>;

// Dense linear map: rows indexed by outputs, columns by inputs, both in
// little-endian order (qubit / boundary position 0 is the least significant
// bit).
struct Tensor {
  int out_bits = 0;
  int in_bits = 0;
  std::vector<Complex> a;  // a[row * 2^in_bits + col]

  Tensor() = default;
  Tensor(int out_b, int in_b)
      : out_bits(out_b),
        in_bits(in_b),
        a(static_cast<std::size_t>(1) << (out_b + in_b), Complex(0, 0)) {}

  std::size_t rows() const { return std::size_t{1} << out_bits; }
  std::size_t cols() const { return std::size_t{1} << in_bits; }
  Complex& at(std::size_t r, std::size_t c) { return a[r * cols() + c]; }
  const Complex& at(std::size_t r, std::size_t c) const {
    return a[r * cols() + c];
  }

  static Tensor identity(int bits) {
    Tensor t(bits, bits);
    for (std::size_t i = 0; i < t.rows(); ++i) t.at(i, i) = 1.0;
    return t;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
  }
};

// True iff a == lambda * b for some nonzero scalar lambda, with lambda chosen
// via the largest-magnitude entry of b.
inline bool equal_up_to_scalar(const Tensor& a, const Tensor& b, double tol) {
  if (a.out_bits != b.out_bits || a.in_bits != b.in_bits)
    throw ShapeMismatchError("equal_up_to_scalar: shape mismatch");
  std::size_t k = 0;
  double best = 0;
  for (std::size_t i = 0; i < b.a.size(); ++i) {
    double m = std::abs(b.a[i]);
    if (m > best) {
      best = m;
      k = i;
    }
  }
  double a_norm = a.max_abs();
  if (best == 0.0) return a_norm == 0.0;
  Complex lambda = a.a[k] / b.a[k];
  if (std::abs(lambda) == 0.0) return false;
  double bound = tol * a_norm;
  for (std::size_t i = 0; i < a.a.size(); ++i)
    if (std::abs(a.a[i] - lambda * b.a[i]) > bound) return false;
  return true;
}

// ---------------------------------------------------------------------------
// circuit_to_unitary: ordered product of gate matrices, qubit 0 = LSB.
// ---------------------------------------------------------------------------

namespace detail {

// Applies a single-qubit matrix [[m00,m01],[m10,m11]] to the row space of U.
inline void apply_1q(Tensor& u, int q, Complex m00, Complex m01, Complex m10,
                     Complex m11) {
  std::size_t bit = std::size_t{1} << q;
  std::size_t cols = u.cols();
  for (std::size_t r = 0; r < u.rows(); ++r) {
    if (r & bit) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      Complex lo = u.at(r, c), hi = u.at(r | bit, c);
      u.at(r, c) = m00 * lo + m01 * hi;
      u.at(r | bit, c) = m10 * lo + m11 * hi;
    }
  }
}

}  // namespace detail

inline Tensor circuit_to_unitary(const Circuit& c) {
  if (c.width > 8) throw TooLargeError("circuit_to_unitary: width > 8");
  Tensor u = Tensor::identity(c.width);
  std::size_t cols = u.cols();
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::H: {
        double s = 1.0 / std::sqrt(2.0);
        detail::apply_1q(u, g.q0, s, s, s, -s);
        break;
      }
      case GateKind::Rz: {
        Complex e = std::polar(1.0, g.phase.radians());
        detail::apply_1q(u, g.q0, 1.0, 0.0, 0.0, e);
        break;
      }
      case GateKind::Rx: {
        // |+><+| + e^{i a} |-><-|
        Complex e = std::polar(1.0, g.phase.radians());
        detail::apply_1q(u, g.q0, (1.0 + e) / 2.0, (1.0 - e) / 2.0,
                         (1.0 - e) / 2.0, (1.0 + e) / 2.0);
        break;
      }
      case GateKind::Cnot: {
        std::size_t cb = std::size_t{1} << g.q0, tb = std::size_t{1} << g.q1;
        for (std::size_t r = 0; r < u.rows(); ++r) {
          if (!(r & cb) || (r & tb)) continue;  // visit each pair once
          for (std::size_t col = 0; col < cols; ++col)
            std::swap(u.at(r, col), u.at(r | tb, col));
        }
        break;
      }
      case GateKind::Cz: {
        std::size_t ab = std::size_t{1} << g.q0, bb = std::size_t{1} << g.q1;
        for (std::size_t r = 0; r < u.rows(); ++r)
          if ((r & ab) && (r & bb))
            for (std::size_t col = 0; col < cols; ++col) u.at(r, col) *= -1.0;
        break;
      }
      case GateKind::Swap: {
        std::size_t ab = std::size_t{1} << g.q0, bb = std::size_t{1} << g.q1;
        for (std::size_t r = 0; r < u.rows(); ++r) {
          if (!(r & ab) || (r & bb)) continue;
          std::size_t r2 = (r & ~ab) | bb;
          for (std::size_t col = 0; col < cols; ++col)
            std::swap(u.at(r, col), u.at(r2, col));
        }
        break;
      }
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// diagram_to_tensor: greedy contraction over an expanded node graph where
// every spider is a Z spider and Hadamard boxes are explicit rank-2 nodes.
// ---------------------------------------------------------------------------

namespace detail {

struct ContractionNode {
  bool is_hbox = false;
  Phase phase;                 // Z spiders only
  std::vector<int> wires;      // index ids; may repeat for internal loops
};

// Frontier tensor over a list of open wire indices, axis 0 slowest.
struct Frontier {
  std::vector<int> axes;
  std::vector<Complex> data{Complex(1, 0)};

  int axis_of(int wire) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
      if (axes[i] == wire) return static_cast<int>(i);
    return -1;
  }
};

inline void absorb_z_spider(Frontier& f, const ContractionNode& node,
                            int max_axes) {
  // Distinct wires of the node, split into matched (already open) and new.
  // A wire held twice by the same spider is an internal loop: its constraint
  // is satisfied for either spider value, so it closes immediately.
  std::vector<int> wires = node.wires;
  std::sort(wires.begin(), wires.end());
  std::vector<int> matched, fresh;
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (i + 1 < wires.size() && wires[i + 1] == wires[i]) {
      ++i;
      continue;
    }
    (f.axis_of(wires[i]) >= 0 ? matched : fresh).push_back(wires[i]);
  }

  std::vector<int> kept;
  for (int a : f.axes)
    if (std::find(matched.begin(), matched.end(), a) == matched.end())
      kept.push_back(a);
  std::vector<int> out_axes = kept;
  out_axes.insert(out_axes.end(), fresh.begin(), fresh.end());
  if (static_cast<int>(out_axes.size()) > max_axes)
    throw TooLargeError("diagram_to_tensor: contraction width exceeded");

  std::size_t out_size = std::size_t{1} << out_axes.size();
  std::vector<Complex> out(out_size, Complex(0, 0));

  // Strides of old axes in the old layout (axis 0 slowest).
  auto strides = [](std::size_t n) {
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::size_t{1} << (n - 1 - i);
    return s;
  };
  auto old_stride = strides(f.axes.size());
  std::vector<std::size_t> kept_strides;
  for (int a : kept) kept_strides.push_back(old_stride[f.axis_of(a)]);
  std::vector<std::size_t> matched_strides;
  for (int m : matched) matched_strides.push_back(old_stride[f.axis_of(m)]);

  Complex factor[2] = {Complex(1, 0), std::polar(1.0, node.phase.radians())};
  std::size_t kept_count = std::size_t{1} << kept.size();
  std::size_t fresh_bits = fresh.size();
  for (int b = 0; b < 2; ++b) {
    std::size_t matched_off = 0;
    if (b)
      for (auto s : matched_strides) matched_off += s;
    // new axes all take value b
    std::size_t fresh_off = 0;
    if (b && fresh_bits) fresh_off = (std::size_t{1} << fresh_bits) - 1;
    for (std::size_t ki = 0; ki < kept_count; ++ki) {
      std::size_t old_index = matched_off;
      for (std::size_t i = 0; i < kept_strides.size(); ++i)
        if (ki & (std::size_t{1} << (kept.size() - 1 - i)))
          old_index += kept_strides[i];
      std::size_t new_index = (ki << fresh_bits) | fresh_off;
      out[new_index] += factor[b] * f.data[old_index];
    }
  }
  f.axes = std::move(out_axes);
  f.data = std::move(out);
}

inline void absorb_hbox(Frontier& f, const ContractionNode& node,
                        int max_axes) {
  int w0 = node.wires[0], w1 = node.wires[1];
  const double s = 1.0 / std::sqrt(2.0);
  auto h = [&](int i, int j) { return (i && j) ? -s : s; };

  std::vector<int> matched, fresh;
  for (int w : {w0, w1}) (f.axis_of(w) >= 0 ? matched : fresh).push_back(w);
  std::vector<int> kept;
  for (int a : f.axes)
    if (std::find(matched.begin(), matched.end(), a) == matched.end())
      kept.push_back(a);
  std::vector<int> out_axes = kept;
  out_axes.insert(out_axes.end(), fresh.begin(), fresh.end());
  if (static_cast<int>(out_axes.size()) > max_axes)
    throw TooLargeError("diagram_to_tensor: contraction width exceeded");

  auto strides = [](std::size_t n) {
    std::vector<std::size_t> s2(n);
    for (std::size_t i = 0; i < n; ++i) s2[i] = std::size_t{1} << (n - 1 - i);
    return s2;
  };
  auto old_stride = strides(f.axes.size());
  std::vector<std::size_t> kept_strides;
  for (int a : kept) kept_strides.push_back(old_stride[f.axis_of(a)]);

  std::size_t out_size = std::size_t{1} << out_axes.size();
  std::vector<Complex> out(out_size, Complex(0, 0));
  std::size_t kept_count = std::size_t{1} << kept.size();
  std::size_t fresh_bits = fresh.size();

  for (int v0 = 0; v0 < 2; ++v0) {
    for (int v1 = 0; v1 < 2; ++v1) {
      // value assignment for the two node wires
      auto value_of = [&](int w) { return w == w0 ? v0 : v1; };
      std::size_t matched_off = 0;
      for (int m : matched)
        if (value_of(m)) matched_off += old_stride[f.axis_of(m)];
      std::size_t fresh_off = 0;
      for (std::size_t i = 0; i < fresh.size(); ++i)
        if (value_of(fresh[i]))
          fresh_off |= std::size_t{1} << (fresh_bits - 1 - i);
      for (std::size_t ki = 0; ki < kept_count; ++ki) {
        std::size_t old_index = matched_off;
        for (std::size_t i = 0; i < kept_strides.size(); ++i)
          if (ki & (std::size_t{1} << (kept.size() - 1 - i)))
            old_index += kept_strides[i];
        out[(ki << fresh_bits) | fresh_off] += h(v0, v1) * f.data[old_index];
      }
    }
  }
  f.axes = std::move(out_axes);
  f.data = std::move(out);
}

}  // namespace detail

inline Tensor diagram_to_tensor(const ZXDiagram& d, int max_axes = 26) {
  if (d.boundary_count() > 16)
    throw TooLargeError("diagram_to_tensor: more than 16 boundaries");

  using detail::ContractionNode;
  std::vector<ContractionNode> nodes;
  std::map<ZXDiagram::VertexId, int> node_of_vertex;
  std::map<ZXDiagram::VertexId, int> boundary_wire;  // vertex id -> wire id
  int next_wire = 0;

  for (const auto& [vid, v] : d.vertices()) {
    if (v.is_boundary()) continue;
    node_of_vertex[vid] = static_cast<int>(nodes.size());
    nodes.push_back({false, v.phase, {}});
  }

  // Attaches one wire end to a vertex, inserting an H box when the vertex is
  // an X spider (X = H Z H on every leg) and recording boundary wires.
  auto attach = [&](ZXDiagram::VertexId vid, int wire) {
    const Vertex& v = d.vertex(vid);
    if (v.is_boundary()) {
      boundary_wire[vid] = wire;
      return;
    }
    if (v.kind == VertexKind::X) {
      int inner = next_wire++;
      nodes.push_back({true, Phase(), {wire, inner}});
      nodes[node_of_vertex[vid]].wires.push_back(inner);
    } else {
      nodes[node_of_vertex[vid]].wires.push_back(wire);
    }
  };

  for (const auto& [k, c] : d.edges()) {
    bool both_boundary = d.vertex(k.first).is_boundary() &&
                         d.vertex(k.second).is_boundary();
    for (int i = 0; i < c.simple; ++i) {
      if (both_boundary) {
        // Bare wire between two boundaries: carried by an identity Z node.
        int w0 = next_wire++, w1 = next_wire++;
        nodes.push_back({false, Phase(), {w0, w1}});
        attach(k.first, w0);
        attach(k.second, w1);
        continue;
      }
      int w = next_wire++;
      attach(k.first, w);
      attach(k.second, w);
    }
    for (int i = 0; i < c.hadamard; ++i) {
      int w0 = next_wire++, w1 = next_wire++;
      nodes.push_back({true, Phase(), {w0, w1}});
      attach(k.first, w0);
      attach(k.second, w1);
    }
  }

  detail::Frontier f;
  std::vector<bool> done(nodes.size(), false);
  for (std::size_t step = 0; step < nodes.size(); ++step) {
    // Greedy: absorb the node minimizing the resulting open-axis count.
    int best = -1;
    int best_width = max_axes + 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (done[i]) continue;
      std::vector<int> wires = nodes[i].wires;
      std::sort(wires.begin(), wires.end());
      wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
      int width = static_cast<int>(f.axes.size());
      for (int w : wires) width += f.axis_of(w) >= 0 ? -1 : 1;
      if (width < best_width) {
        best_width = width;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    if (nodes[best].is_hbox)
      detail::absorb_hbox(f, nodes[best], max_axes);
    else
      detail::absorb_z_spider(f, nodes[best], max_axes);
    done[best] = true;
  }

  // Remaining open axes must be exactly the boundary wires.
  int n_out = static_cast<int>(d.outputs().size());
  int n_in = static_cast<int>(d.inputs().size());
  Tensor t(n_out, n_in);
  std::size_t total = std::size_t{1} << f.axes.size();
  if (f.axes.size() != static_cast<std::size_t>(n_out + n_in))
    throw Error("diagram_to_tensor: open axes do not match boundaries");
  // axis -> (is_output, position)
  struct AxisRole {
    bool is_output;
    int pos;
  };
  std::vector<AxisRole> role(f.axes.size());
  for (std::size_t i = 0; i < f.axes.size(); ++i) {
    int wire = f.axes[i];
    bool found = false;
    for (int p = 0; p < n_out; ++p)
      if (boundary_wire.at(d.outputs()[p]) == wire) {
        role[i] = {true, p};
        found = true;
      }
    for (int p = 0; p < n_in; ++p)
      if (boundary_wire.at(d.inputs()[p]) == wire) {
        role[i] = {false, p};
        found = true;
      }
    if (!found) throw Error("diagram_to_tensor: dangling internal wire");
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = 0, c = 0;
    for (std::size_t i = 0; i < f.axes.size(); ++i) {
      bool bit = idx & (std::size_t{1} << (f.axes.size() - 1 - i));
      if (!bit) continue;
      if (role[i].is_output)
        r |= std::size_t{1} << role[i].pos;
      else
        c |= std::size_t{1} << role[i].pos;
    }
    t.at(r, c) += f.data[idx];
  }
  return t;
}

}  // namespace zxopt
