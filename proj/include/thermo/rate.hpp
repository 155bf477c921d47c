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


// Level-1 rate functions by two independent routes (Legendre dual of L and
// constrained entropy minimisation over Markov measures) and the level-2
// rate P(f) - h(mu) - mu(f).

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "thermo/convex.hpp"
#include "thermo/extended_real.hpp"
#include "thermo/markov.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {

double level2_rate(const Sft& sft, const Potential& f, const MarkovMeasure& mu);

/// I(x) = inf { P(f) - h(mu) - mu(f) : (mu(f_1), ..., mu(f_n)) = x }.
class RateFunction {
 public:
  RateFunction(Sft sft, Potential base, std::vector<Potential> directions);

  const LogMgf& log_mgf() const { return lm_; }
  const Sft& sft() const { return lm_.sft(); }
  const Potential& base() const { return lm_.base(); }
  const std::vector<Potential>& directions() const { return lm_.directions(); }
  int dimension() const { return lm_.dimension(); }
  double base_pressure() const { return lm_.base_pressure(); }

 private:
  LogMgf lm_;
};

/// L^*(x); throws ConvergenceError when the ascent neither converges nor
/// escapes along a ray.
ExtendedReal rate_dual(const RateFunction& rate, const Eigen::VectorXd& x,
                       const LegendreOptions& opts = {});

struct PrimalOptions {
  double initial_penalty = 1e2;
  double final_penalty = 1e8;
  double penalty_growth = 10.0;
  double feasibility_tolerance = 1e-6;  ///< moment residual above this means +inf
  int max_newton_steps = 200;           ///< per penalty stage
};

struct PrimalResult {
  ExtendedReal value;
  std::optional<MarkovMeasure> argmin;
  double residual = 0.0;  ///< max_k |q(f_k) - x_k| at the final stage
  int newton_steps = 0;
};

/// Minimises P(f) - h(mu) - mu(f) over Markov measures with memory
/// max(depth - 1, 1) under moment constraints enforced by a quadratic penalty
/// with continuation. Variables are the edge flows of the block graph inside
/// its nontrivial components; shift invariance and total mass are imposed
/// exactly through a null-space basis, positivity by a fraction-to-boundary
/// rule in damped Newton steps.
PrimalResult rate_primal(const RateFunction& rate, const Eigen::VectorXd& x,
                         const PrimalOptions& opts = {});

struct AuditRow {
  Eigen::VectorXd x;
  ExtendedReal dual;
  ExtendedReal primal;
  double gap = 0.0;  ///< |dual - primal|; 0 when both are +inf, +inf when only one is
};

struct DualityAudit {
  std::vector<AuditRow> rows;
  double max_gap = 0.0;
  /// Smallest (I(a) + I(b)) / 2 - I((a + b) / 2) over grid pairs whose
  /// midpoint is also a grid point; +inf when no such triple exists.
  double min_convexity_margin = 0.0;
  bool convex = true;
  bool pass = true;
  double tolerance = 0.0;
};

inline constexpr double kDualityTolerance = 1e-6;
inline constexpr double kConvexitySlack = 1e-9;

DualityAudit duality_audit(const RateFunction& rate, const std::vector<Eigen::VectorXd>& grid,
                           double tolerance = kDualityTolerance);

}  // namespace thermo
