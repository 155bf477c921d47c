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


// Finite-n laws of Birkhoff averages under the weights exp(S_n f(w)) on
// admissible n-words, and exact large-deviation audits built on them.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "thermo/extended_real.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {

/// (1/n) [log 1^T M_{f+g}^n 1 - log 1^T M_f^n 1] with transfer matrices on a
/// common block presentation; powers are renormalised every step.
double finite_n_mgf(const Sft& sft, const Potential& f, const Potential& g, int n);

/// Each admissible n-word w weighted by exp(S_n f(w)) / Z_n, Birkhoff sums
/// taken periodically. Words are kept in lexicographic order.
class EmpiricalLaw {
 public:
  EmpiricalLaw(Sft sft, Potential f, int n, std::int64_t cap = kDefaultEnumerationCap);

  const Sft& sft() const { return sft_; }
  const Potential& base() const { return base_; }
  int length() const { return n_; }
  const std::vector<Word>& words() const { return words_; }
  /// Normalised; sums to 1.
  const Eigen::VectorXd& weights() const { return weights_; }
  /// S_n f(w) per word.
  const Eigen::VectorXd& log_weights() const { return log_weights_; }
  double log_partition() const { return log_partition_; }

  /// The law reweighted by exp(S_n g) and renormalised.
  EmpiricalLaw tilted(const Potential& g) const;

 private:
  EmpiricalLaw(Sft sft, Potential f, int n, std::vector<Word> words,
               Eigen::VectorXd log_weights);

  Sft sft_;
  Potential base_;
  int n_;
  std::vector<Word> words_;
  Eigen::VectorXd log_weights_;
  Eigen::VectorXd weights_;
  double log_partition_ = 0.0;
};

/// Law of ((1/n) S_n f_1, ..., (1/n) S_n f_d) under an EmpiricalLaw.
class PushforwardLaw {
 public:
  PushforwardLaw(EmpiricalLaw law, std::vector<Potential> directions);

  const EmpiricalLaw& law() const { return law_; }
  const std::vector<Potential>& directions() const { return directions_; }
  /// One column per word.
  const Eigen::MatrixXd& points() const { return points_; }

 private:
  EmpiricalLaw law_;
  std::vector<Potential> directions_;
  Eigen::MatrixXd points_;
};

/// Slack added to the ball radius so that atoms on the sphere count as inside.
inline constexpr double kBallBoundaryTolerance = 1e-12;

/// (1/n) log of the weight of the closed sup-norm ball B(x, delta), or -inf
/// when the ball holds no atom.
ExtendedReal ball_log_probability(const PushforwardLaw& pl, const Eigen::VectorXd& x,
                                  double delta);

inline constexpr std::int64_t kDefaultDpStateCap = 5'000'000;

struct BallDpResult {
  ExtendedReal value;
  /// Bound on the sup-norm error of the quantised averages.
  double quantization_error = 0.0;
  std::int64_t peak_states = 0;
};

/// The same quantity by dynamic programming over (first k-1 symbols, last
/// k-1 symbols, quantised partial sums); partial sums are rounded on a grid
/// of step delta / 8, so averages carry error at most delta / 16.
BallDpResult ball_log_probability_dp(const Sft& sft, const Potential& f,
                                     const std::vector<Potential>& directions, int n,
                                     const Eigen::VectorXd& x, double delta,
                                     std::int64_t state_cap = kDefaultDpStateCap);

enum class BallRoute { kAuto, kEnumeration, kDynamicProgram };

/// Enumeration when the word count fits the enumeration cap (or when asked),
/// the dynamic program otherwise.
ExtendedReal ball_log_probability(const Sft& sft, const Potential& f,
                                  const std::vector<Potential>& directions, int n,
                                  const Eigen::VectorXd& x, double delta,
                                  BallRoute route = BallRoute::kAuto);

struct GartnerRow {
  int n = 0;
  Eigen::VectorXd x;
  ExtendedReal empirical;  ///< (1/n) log weight of B(x, delta)
  double predicted = 0.0;  ///< -inf_B I
};

struct GartnerPoint {
  Eigen::VectorXd x;
  double intercept = 0.0;  ///< fitted limit of (1/n) log weight
  double predicted = 0.0;
  double discrepancy = 0.0;
  bool fitted = false;     ///< false when fewer than two non-empty balls
};

struct GartnerReport {
  bool hypothesis = false;  ///< the base has a unique equilibrium state
  bool pass = false;
  double tolerance = 0.0;
  double lipschitz = 0.0;   ///< largest l1 norm of grad I over the grid
  double max_discrepancy = 0.0;
  std::vector<GartnerRow> rows;
  std::vector<GartnerPoint> points;
};

/// Compares the fitted limit of (1/n) log nu_n(B(x, delta)) with
/// -inf_{B(x, delta)} I for the base f + g; passes when every discrepancy is
/// within L delta + 10 log(n_max) / n_max and the base is differentiable.
GartnerReport gartner_audit(const Sft& sft, const Potential& f, const Potential& g,
                            const std::vector<Potential>& directions,
                            const std::vector<int>& n_schedule,
                            const std::vector<Eigen::VectorXd>& x_grid, double delta);

}  // namespace thermo
