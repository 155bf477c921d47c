// Copyright 2026 The Thermo Authors
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

#include <limits>
#include <string>

namespace thermo {

/// A real number or one of the two infinities, with the infinite cases
/// carried as an explicit tag rather than a sentinel float.
class ExtendedReal {
 public:
  enum class Kind { kFinite, kPlusInfinity, kMinusInfinity };

  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by design of arithmetic use

  static constexpr ExtendedReal PlusInfinity() {
    ExtendedReal r;
    r.kind_ = Kind::kPlusInfinity;
    return r;
  }
  static constexpr ExtendedReal MinusInfinity() {
    ExtendedReal r;
    r.kind_ = Kind::kMinusInfinity;
    return r;
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_plus_infinity() const { return kind_ == Kind::kPlusInfinity; }
  constexpr bool is_minus_infinity() const {
    return kind_ == Kind::kMinusInfinity;
  }

  /// Finite value; infinities map to the IEEE infinities for arithmetic.
  constexpr double value() const {
    switch (kind_) {
      case Kind::kPlusInfinity:
        return std::numeric_limits<double>::infinity();
      case Kind::kMinusInfinity:
        return -std::numeric_limits<double>::infinity();
      default:
        return value_;
    }
  }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  Kind kind_ = Kind::kFinite;
};

}  // namespace thermo
