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


// Topological pressure of locally constant potentials: the exact spectral
// value with its equilibrium states, and the finite-n partition-function
// route over periodic words.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "thermo/block.hpp"
#include "thermo/markov.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {

/// Components whose log Perron values differ by less than this share the max.
inline constexpr double kPressureTieTolerance = 1e-10;

/// exp(f) on the edges of a block presentation, stored as
/// entries = exp(f - log_scale) so that large potentials do not overflow.
struct TransferMatrix {
  Eigen::MatrixXd entries;
  double log_scale = 0.0;
};

TransferMatrix transfer_matrix(const BlockPresentation& block, const Potential& f);

struct ComponentPressure {
  int component;  ///< symbol component label
  double log_perron;
};

struct PressureReport {
  double pressure = 0.0;
  std::vector<ComponentPressure> per_component;
  std::vector<int> maximizers;
  /// One extreme equilibrium state per maximizing component, same order.
  std::vector<MarkovMeasure> equilibrium_states;
  bool unique = false;
};

/// Max over nontrivial components of the log Perron root of the restricted
/// transfer matrix, with the Gibbs chain of every maximizer.
PressureReport pressure_spectral(const Sft& sft, const Potential& f,
                                 std::int64_t state_cap = kDefaultBlockStateCap);

/// (1/n) log sum over admissible n-words w of exp(S_n f(w)), Birkhoff sums
/// taken periodically. Exact dynamic program over (first k-1 symbols,
/// last k-1 symbols); no enumeration.
double pressure_direct(const Sft& sft, const Potential& f, int n,
                       std::int64_t state_cap = kDefaultBlockStateCap);

/// The same quantity by listing every admissible n-word.
double pressure_direct_enumerated(const Sft& sft, const Potential& f, int n,
                                  std::int64_t cap = kDefaultEnumerationCap);

/// One-sided derivatives of t -> P(f + t g) at t = 0: extremes of mu(g) over
/// the extreme equilibrium states.
struct DirectionalDerivatives {
  double left = 0.0;
  double right = 0.0;
};

DirectionalDerivatives directional_derivatives(const PressureReport& report,
                                               const Potential& g);
DirectionalDerivatives directional_derivatives(const Sft& sft, const Potential& f,
                                               const Potential& g);

struct GateauxProbe {
  double left = 0.0;
  double right = 0.0;
  bool symmetric = true;
};

struct GateauxReport {
  bool differentiable = true;
  bool unique = true;
  std::vector<GateauxProbe> probes;
  int witness = -1;  ///< first probe with right > left, or -1
};

inline constexpr double kGateauxTolerance = 1e-10;

GateauxReport gateaux_check(const Sft& sft, const Potential& f,
                            const std::vector<Potential>& probes);

}  // namespace thermo
