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

// Shift-invariant Markov measures presented as stationary chains on words.

#pragma once

#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "thermo/block.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {

inline constexpr double kStochasticTolerance = 1e-12;

/// Stationary Markov chain whose states are words of a fixed length `depth`.
/// A transition u -> v may be positive only when v is the one-step shift of
/// u, so the chain is the higher-block recoding of a shift-invariant measure.
///
/// The constructor checks row sums, stationarity and the shift structure to
/// within kStochasticTolerance.
class MarkovMeasure {
 public:
  MarkovMeasure(int alphabet_size, int depth, std::vector<Word> states,
                Eigen::MatrixXd transition, Eigen::VectorXd stationary);

  int alphabet_size() const { return alphabet_size_; }
  int depth() const { return depth_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  const std::vector<Word>& states() const { return states_; }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }
  /// -1 when the word is not a state.
  int state_index(std::span<const Symbol> word) const;

 private:
  int alphabet_size_;
  int depth_;
  std::vector<Word> states_;
  Eigen::MatrixXd transition_;
  Eigen::VectorXd stationary_;
  std::unordered_map<WordCode, int> index_;
};

/// Product measure with the given symbol probabilities.
MarkovMeasure bernoulli(const Eigen::VectorXd& probabilities);

/// Chain with the given transition matrix on the admissible `depth`-words of
/// `sft` (lexicographic order); the stationary vector is solved for and the
/// support must form a single closed class.
MarkovMeasure markov_from_transition(const Sft& sft, int depth,
                                     const Eigen::MatrixXd& transition);

/// Unique stationary vector of a stochastic matrix with one closed class.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

/// Throws InputError unless every positive-probability transition is an
/// admissible word of `sft`.
void check_support(const Sft& sft, const MarkovMeasure& mu);

/// Kolmogorov-Sinai entropy -sum_u pi_u sum_v P_uv log P_uv.
double entropy(const MarkovMeasure& mu);

/// Integral of a locally constant potential; mu is lifted first when
/// depth(f) > depth(mu) + 1.
double expectation(const MarkovMeasure& mu, const Potential& f);

/// mu([w]) for any non-empty word.
double cylinder_probability(const MarkovMeasure& mu, std::span<const Symbol> word);

/// Higher-block recoding on `depth`-words; states with zero mass are dropped.
MarkovMeasure lift(const MarkovMeasure& mu, int depth);

/// max over admissible L-words w of |mu([w]) - nu([w])|.
double cylinder_distance(const Sft& sft, const MarkovMeasure& mu,
                         const MarkovMeasure& nu, int length);

/// Renumbers symbols s -> s + offset inside a larger alphabet.
MarkovMeasure embed(const MarkovMeasure& mu, int alphabet_size, int offset);

/// lambda mu + (1 - lambda) nu for measures with disjoint state sets,
/// realised as one block-diagonal chain.
MarkovMeasure mix_disjoint(const MarkovMeasure& mu, const MarkovMeasure& nu,
                           double lambda);

/// Mass carried by each symbol component of `sft`, as (component, mass).
std::vector<std::pair<int, double>> component_masses(const Sft& sft,
                                                     const MarkovMeasure& mu);

/// A measure is ergodic iff its support chain is irreducible.
bool is_ergodic(const MarkovMeasure& mu);

/// Maximal-entropy chain on one component of a block presentation.
MarkovMeasure parry_measure(const BlockPresentation& block, int component_slot);

/// Evidence that no ergodic measure is close to mu: every ergodic measure
/// sits on one component, so it is at total-variation distance at least
/// 1 - max_c mass(c).
struct FailureCertificate {
  std::vector<std::pair<int, double>> component_masses;
  double tv_lower_bound = 0.0;
};

using ErgodicApproximation = std::variant<MarkovMeasure, FailureCertificate>;

/// Mixes mu with the Parry chain of the component it lives on, weight eps.
/// Measures spread over two or more components yield a FailureCertificate.
ErgodicApproximation ergodic_approximation(const Sft& sft, const MarkovMeasure& mu,
                                           double eps);

}  // namespace thermo
