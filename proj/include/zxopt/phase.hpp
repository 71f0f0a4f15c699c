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

#include <cstdint>
#include <numeric>
#include <string>

#include "zxopt/errors.hpp"

namespace zxopt {

// Exact rational multiple of pi, reduced and normalized to [0, 2pi).
// Value represented is (num/den) * pi.
class Phase {
 public:
  constexpr Phase() = default;
  Phase(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw Error("Phase: zero denominator");
    normalize();
  }

  static Phase zero() { return Phase(); }
  static Phase pi() { return Phase(1, 1); }
  static Phase half_pi() { return Phase(1, 2); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_pi() const { return num_ == 1 && den_ == 1; }
  // Integer multiple of pi/2 (the Clifford angles).
  bool is_clifford() const { return den_ <= 2; }
  // Odd multiple of pi/4.
  bool is_odd_quarter() const { return den_ == 4; }
  bool is_plus_minus_half_pi() const {
    return den_ == 2 && (num_ == 1 || num_ == 3);
  }

  Phase operator+(const Phase& o) const {
    std::int64_t g = std::gcd(den_, o.den_);
    std::int64_t d = den_ / g * o.den_;
    return Phase(num_ * (o.den_ / g) + o.num_ * (den_ / g), d);
  }
  Phase operator-() const { return Phase(-num_, den_); }
  Phase operator-(const Phase& o) const { return *this + (-o); }
  Phase& operator+=(const Phase& o) { return *this = *this + o; }

  bool operator==(const Phase& o) const = default;
  auto operator<=>(const Phase& o) const = default;

  double radians() const {
    return 3.14159265358979323846 * static_cast<double>(num_) /
           static_cast<double>(den_);
  }

  // Reduced fraction of pi, e.g. "0", "1", "3/4".
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Parses "num" or "num/den".
  static Phase parse(const std::string& s) {
    std::size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return Phase(std::stoll(s), 1);
      return Phase(std::stoll(s.substr(0, slash)),
                   std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw ParseError("bad phase literal: " + s);
    }
  }

 private:
  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    std::int64_t period = 2 * den_;
    num_ %= period;
    if (num_ < 0) num_ += period;
    // Renormalize in case the modulo reduced the fraction (e.g. 8/4 -> 0).
    g = std::gcd(num_, den_);
    if (num_ == 0) {
      den_ = 1;
    } else if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace zxopt
