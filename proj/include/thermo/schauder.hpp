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


// Haar-type cylinder basis of the locally constant functions up to a fixed
// depth, its coordinate functionals, and finite-stage span checks.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {

/// Element 0 is the constant 1. Then, for each admissible word w of length
/// 0..K-1 (by length, then lexicographically) with continuations j_0 < j_1 <
/// ... and each non-initial continuation j, the element
///   phi_{w,j} = 1_[wj] - 1_[w] / (number of continuations of w).
/// The coordinate of phi_{w,j} is c(wj) - c(wj_0), where c(u) averages f
/// uniformly down the word tree below u.
class CylinderBasis {
 public:
  CylinderBasis(Sft sft, int depth, std::int64_t leaf_cap = kDefaultLeafCap);

  static constexpr std::int64_t kDefaultLeafCap = 4096;

  const Sft& sft() const { return sft_; }
  int depth() const { return depth_; }
  int size() const { return static_cast<int>(prefix_.size()); }
  /// Admissible depth-K words, lexicographic; the coordinates of the synthesis
  /// and analysis matrices.
  const std::vector<Word>& leaves() const { return leaves_; }

  /// The word w and continuation j of element i; empty word and -1 for i = 0.
  const Word& prefix(int i) const { return prefix_[i]; }
  Symbol continuation(int i) const { return continuation_[i]; }

  Potential element(int i) const;
  /// Column i holds element i on the leaves.
  const Eigen::MatrixXd& synthesis() const { return synthesis_; }
  /// Row i holds the leaf weights of coordinate functional i.
  const Eigen::MatrixXd& analysis() const { return analysis_; }
  /// s_i = sup_{|f| <= 1} |lambda_i(f)|, the l1 norm of row i of analysis().
  double functional_norm(int i) const { return norms_[i]; }
  const Eigen::VectorXd& functional_norms() const { return norms_; }

  /// f on the leaves (depth(f) <= K).
  Eigen::VectorXd leaf_values(const Potential& f) const;

 private:
  Sft sft_;
  int depth_;
  std::vector<Word> leaves_;
  std::vector<Word> prefix_;
  std::vector<Symbol> continuation_;
  Eigen::MatrixXd synthesis_;
  Eigen::MatrixXd analysis_;
  Eigen::VectorXd norms_;
};

/// Coordinates of f; throws InputError when depth(f) exceeds the basis depth.
Eigen::VectorXd expand(const CylinderBasis& basis, const Potential& f);

/// sum_i coefficients_i phi_i as a depth-K potential (zero off the language).
Potential reconstruct(const CylinderBasis& basis, const Eigen::VectorXd& coefficients);

struct PerturbationCheck {
  double sum = 0.0;
  bool holds = false;  ///< sum < 1
};

/// sum_n s_n |h_n|; below 1 the perturbed system (phi_n + h_n) stays a basis.
PerturbationCheck perturbation_condition(const CylinderBasis& basis,
                                         const std::vector<double>& h_norms);

struct SpanVerdict {
  bool h_independent = false;
  bool f_independent = false;
  bool inclusion_holds = true;
  /// (h independent => inclusion) and (f independent and inclusion => h independent).
  bool implications_hold = true;
  int trials = 0;
  int violations = 0;
  double max_residual = 0.0;
};

inline constexpr double kSpanTolerance = 1e-9;

/// Tests span{f_n + h_n} \ {0} ⊂ W + (W~ \ {0}) on random combinations:
/// a combination violates it when its W~ component vanishes. Half of the
/// trials draw coefficients from the kernel of (h_n) so that any dependence
/// among the h_n is exercised.
SpanVerdict span_inclusion_check(const CylinderBasis& basis,
                               const std::vector<Potential>& w_basis,
                               const std::vector<Potential>& wt_basis,
                               const std::vector<Potential>& f_seq,
                               const std::vector<Potential>& h_seq, int trials = 200,
                               std::uint64_t seed = 0);

}  // namespace thermo
