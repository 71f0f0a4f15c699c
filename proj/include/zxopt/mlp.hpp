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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "zxopt/errors.hpp"
#include "zxopt/features.hpp"
#include "zxopt/rng.hpp"

namespace zxopt {

inline constexpr int kHidden = 64;

// Two tanh hidden layers of 64 units feeding two linear scalar heads:
// W (node weight) and V (node value).
struct PolicyParams {
  // Row-major: w1[h * kFeatureDim + i], w2[h2 * kHidden + h1].
  std::vector<double> w1, b1, w2, b2, ww, bw, wv, bv;

  PolicyParams()
      : w1(kHidden * kFeatureDim, 0.0),
        b1(kHidden, 0.0),
        w2(kHidden * kHidden, 0.0),
        b2(kHidden, 0.0),
        ww(kHidden, 0.0),
        bw(1, 0.0),
        wv(kHidden, 0.0),
        bv(1, 0.0) {}

  // Gains are deliberately larger than the classic 1/sqrt(fan_in): the
  // fresh policy then expresses strong (arbitrary) node preferences, and
  // training has to learn to reshape them around the features instead of
  // starting indistinguishable from the uniform policy.
  static PolicyParams init(Rng& rng) {
    PolicyParams p;
    auto fill = [&](std::vector<double>& v, int fan_in, double gain) {
      double scale = gain / std::sqrt(static_cast<double>(fan_in));
      for (auto& x : v) x = (2.0 * rng.real() - 1.0) * scale;
    };
    fill(p.w1, kFeatureDim, 4.0);
    fill(p.w2, kHidden, 2.0);
    fill(p.ww, kHidden, 8.0);
    fill(p.wv, kHidden, 8.0);
    return p;
  }

  std::vector<std::vector<double>*> tensors() {
    return {&w1, &b1, &w2, &b2, &ww, &bw, &wv, &bv};
  }
  std::vector<const std::vector<double>*> tensors() const {
    return {&w1, &b1, &w2, &b2, &ww, &bw, &wv, &bv};
  }

  bool operator==(const PolicyParams& o) const {
    return w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2 &&
           ww == o.ww && bw == o.bw && wv == o.wv && bv == o.bv;
  }
};

struct ForwardCache {
  std::array<double, kFeatureDim> x{};
  std::array<double, kHidden> h1{}, h2{};
  double w = 0.0, v = 0.0;
};

inline ForwardCache policy_forward_cached(const PolicyParams& p,
                                          const FeatureVector& x) {
  ForwardCache c;
  // Squash inputs: raw count features reach O(100), which would pin the
  // tanh units; log1p keeps them monotone and O(1)-scaled.
  for (int i = 0; i < kFeatureDim; ++i)
    c.x[i] = x[i] >= 0.0 ? std::log1p(x[i]) : -std::log1p(-x[i]);
  for (int h = 0; h < kHidden; ++h) {
    double a = p.b1[h];
    for (int i = 0; i < kFeatureDim; ++i)
      a += p.w1[h * kFeatureDim + i] * c.x[i];
    c.h1[h] = std::tanh(a);
  }
  for (int h = 0; h < kHidden; ++h) {
    double a = p.b2[h];
    for (int i = 0; i < kHidden; ++i) a += p.w2[h * kHidden + i] * c.h1[i];
    c.h2[h] = std::tanh(a);
  }
  c.w = p.bw[0];
  c.v = p.bv[0];
  for (int h = 0; h < kHidden; ++h) {
    c.w += p.ww[h] * c.h2[h];
    c.v += p.wv[h] * c.h2[h];
  }
  return c;
}

inline std::pair<double, double> policy_forward(const PolicyParams& p,
                                                const FeatureVector& x) {
  auto c = policy_forward_cached(p, x);
  return {c.w, c.v};
}

// Accumulates dL/dparams for one input given upstream scalars dL/dW, dL/dV.
inline void policy_backward(const PolicyParams& p, const ForwardCache& c,
                            double dw, double dv, PolicyParams& grad) {
  std::array<double, kHidden> dh2{};
  for (int h = 0; h < kHidden; ++h) {
    grad.ww[h] += dw * c.h2[h];
    grad.wv[h] += dv * c.h2[h];
    dh2[h] = dw * p.ww[h] + dv * p.wv[h];
  }
  grad.bw[0] += dw;
  grad.bv[0] += dv;

  std::array<double, kHidden> da2{};
  for (int h = 0; h < kHidden; ++h) da2[h] = dh2[h] * (1.0 - c.h2[h] * c.h2[h]);
  std::array<double, kHidden> dh1{};
  for (int h = 0; h < kHidden; ++h) {
    grad.b2[h] += da2[h];
    for (int i = 0; i < kHidden; ++i) {
      grad.w2[h * kHidden + i] += da2[h] * c.h1[i];
      dh1[i] += da2[h] * p.w2[h * kHidden + i];
    }
  }
  for (int h = 0; h < kHidden; ++h) {
    double da1 = dh1[h] * (1.0 - c.h1[h] * c.h1[h]);
    grad.b1[h] += da1;
    for (int i = 0; i < kFeatureDim; ++i)
      grad.w1[h * kFeatureDim + i] += da1 * c.x[i];
  }
}

// ---------------------------------------------------------------------------
// Adam optimizer, fully deterministic.
// ---------------------------------------------------------------------------

struct Adam {
  double lr = 3e-4;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  PolicyParams m, v;  // zero-initialized moment buffers
  std::int64_t t = 0;

  void step(PolicyParams& p, const PolicyParams& grad) {
    ++t;
    double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    auto pt = p.tensors();
    auto gt = grad.tensors();
    auto mt = m.tensors();
    auto vt = v.tensors();
    for (std::size_t k = 0; k < pt.size(); ++k) {
      auto& pv = *pt[k];
      const auto& gv = *gt[k];
      auto& mv = *mt[k];
      auto& vv = *vt[k];
      for (std::size_t i = 0; i < pv.size(); ++i) {
        double g = gv[i];
        if (!std::isfinite(g)) throw NonFiniteError("adam: non-finite gradient");
        mv[i] = beta1 * mv[i] + (1.0 - beta1) * g;
        vv[i] = beta2 * vv[i] + (1.0 - beta2) * g * g;
        pv[i] -= lr * (mv[i] / c1) / (std::sqrt(vv[i] / c2) + eps);
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Checkpoint I/O: text format with hexfloat values for bit-exact round trips.
// ---------------------------------------------------------------------------

inline void save_params(std::ostream& os, const PolicyParams& p) {
  os << "zxopt-policy 1\n";
  os << kFeatureDim << " " << kHidden << "\n";
  os << std::hexfloat;
  for (const auto* t : p.tensors()) {
    os << t->size();
    for (double x : *t) os << " " << x;
    os << "\n";
  }
}

inline PolicyParams load_params(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "zxopt-policy" || version != 1)
    throw ParseError("checkpoint: bad header");
  int in_dim = 0, hidden = 0;
  is >> in_dim >> hidden;
  if (in_dim != kFeatureDim || hidden != kHidden)
    throw ParseError("checkpoint: shape mismatch");
  PolicyParams p;
  for (auto* t : p.tensors()) {
    std::size_t n = 0;
    is >> n;
    if (n != t->size()) throw ParseError("checkpoint: tensor size mismatch");
    for (auto& x : *t) {
      std::string tok;
      is >> tok;
      x = std::strtod(tok.c_str(), nullptr);
    }
  }
  if (!is) throw ParseError("checkpoint: truncated");
  return p;
}

inline void save_params_file(const std::string& path, const PolicyParams& p) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open checkpoint for writing: " + path);
  save_params(f, p);
}

inline PolicyParams load_params_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open checkpoint: " + path);
  return load_params(f);
}

}  // namespace zxopt
