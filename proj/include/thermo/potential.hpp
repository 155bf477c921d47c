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

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "thermo/sft.hpp"

namespace thermo {

/// Locally constant function on the shift space: f(x) depends on x_0..x_{k-1}.
///
/// Values are stored densely over all m^k words indexed by WordCode. Entries
/// at inadmissible words are never visited by admissible orbits except as the
/// wrap-around windows of periodic Birkhoff sums.
class Potential {
 public:
  Potential(int alphabet_size, int depth, Eigen::VectorXd values);

  static Potential Zero(int alphabet_size) { return Constant(alphabet_size, 0.0); }
  static Potential Constant(int alphabet_size, double c);
  /// 1 on the cylinders of the listed symbols.
  static Potential SymbolIndicator(int alphabet_size,
                                   const std::vector<Symbol>& symbols);
  /// 1 on the cylinder [word]; depth equals the word length.
  static Potential WordIndicator(int alphabet_size, const Word& word);
  static Potential FromFunction(
      int alphabet_size, int depth,
      const std::function<double(std::span<const Symbol>)>& value);

  int alphabet_size() const { return alphabet_size_; }
  int depth() const { return depth_; }
  const Eigen::VectorXd& values() const { return values_; }

  double at(WordCode code) const { return values_[code]; }
  /// `window` must have exactly depth() symbols.
  double operator()(std::span<const Symbol> window) const;

 private:
  int alphabet_size_;
  int depth_;
  Eigen::VectorXd values_;
};

/// The same function read through a longer window.
Potential lift(const Potential& f, int depth);

Potential operator+(const Potential& f, const Potential& g);
Potential operator-(const Potential& f, const Potential& g);
Potential operator*(double c, const Potential& f);
inline Potential operator*(const Potential& f, double c) { return c * f; }

/// f + sum_k t_k g_k, evaluated at the common maximal depth.
Potential linear_combination(const Potential& f, std::span<const Potential> g,
                             const Eigen::VectorXd& t);

/// Largest |f(w)| over admissible depth(f)-words.
double sup_norm(const Sft& sft, const Potential& f);

/// Throws InputError unless f is finite and lives on the alphabet of `sft`.
void check_potential(const Sft& sft, const Potential& f);

/// S_n f(w) = sum_{i<n} f(w_i ... w_{i+k-1}), indices taken mod n so the word
/// stands for the periodic point it generates.
double birkhoff_sum(const Potential& f, std::span<const Symbol> word);

}  // namespace thermo
