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


// Limiting log-moment generating function L(t) = P(f + sum t_k f_k) - P(f),
// its subdifferential, and its Legendre-Fenchel conjugate.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "thermo/extended_real.hpp"
#include "thermo/potential.hpp"
#include "thermo/pressure.hpp"
#include "thermo/sft.hpp"

namespace thermo {

class LogMgf {
 public:
  LogMgf(Sft sft, Potential base, std::vector<Potential> directions);

  const Sft& sft() const { return sft_; }
  const Potential& base() const { return base_; }
  const std::vector<Potential>& directions() const { return directions_; }
  int dimension() const { return static_cast<int>(directions_.size()); }
  double base_pressure() const { return base_pressure_; }

  /// f + sum_k t_k f_k.
  Potential tilted(const Eigen::VectorXd& t) const;

 private:
  Sft sft_;
  Potential base_;
  std::vector<Potential> directions_;
  double base_pressure_;
};

/// Everything known about L at one point: its value, the maximizing
/// components, and the subdifferential vertices (mu(f_1), ..., mu(f_n)) over
/// the extreme equilibrium states of the tilted potential.
struct LocalData {
  double value = 0.0;
  std::vector<int> maximizers;
  std::vector<Eigen::VectorXd> vertices;
  /// Vertices agree within kSmoothTolerance.
  bool smooth = true;
};

inline constexpr double kSmoothTolerance = 1e-10;

LocalData local_data(const LogMgf& lm, const Eigen::VectorXd& t);

double eval_L(const LogMgf& lm, const Eigen::VectorXd& t);

/// Vertex set of the subdifferential at a point where L is not differentiable.
struct KinkWitness {
  std::vector<Eigen::VectorXd> vertices;
};

using Gradient = std::variant<Eigen::VectorXd, KinkWitness>;

Gradient grad_L(const LogMgf& lm, const Eigen::VectorXd& t);

/// Point of conv(points) closest to the origin, exact for small vertex sets.
Eigen::VectorXd min_norm_point(const std::vector<Eigen::VectorXd>& points);

struct LegendreOptions {
  double tolerance = 1e-10;      ///< on |x - grad L(t)|, or dist(x, dL(t)) at kinks
  double escape_norm = 1e3;      ///< |t| beyond this ends the ascent on a ray
  double slope_tolerance = 1e-6; ///< ray slope above this means +infinity
  int max_iterations = 100'000;
};

struct ConjugateResult {
  ExtendedReal value;
  Eigen::VectorXd maximizer;  ///< last iterate
  bool boundary = false;      ///< ascent escaped along a ray
  bool converged = false;
  bool at_kink = false;       ///< optimality certified by a KinkWitness
  int iterations = 0;
  double residual = 0.0;      ///< distance from x to dL(maximizer)
};

/// sup_t <t, x> - L(t). Quasi-Newton ascent (BFGS inverse-Hessian updates,
/// Armijo backtracking) from t = 0; at nondifferentiable iterates the step
/// follows the minimum-norm subgradient with an exact line search on the
/// one-sided directional derivative.
ConjugateResult legendre(const LogMgf& lm, const Eigen::VectorXd& x,
                         const LegendreOptions& opts = {});

struct Kink {
  double t = 0.0;
  double left = 0.0;   ///< left derivative of t -> P(f + t g)
  double right = 0.0;  ///< right derivative
};

/// Kinks of t -> P(f + t g) on [t_lo, t_hi]: grid points where the set of
/// maximizing components changes are refined by bisection to `resolution`,
/// and kept when the derivative jumps by more than `gap_tolerance`.
std::vector<Kink> kink_scan(const Sft& sft, const Potential& f, const Potential& g,
                            double t_lo, double t_hi, int grid,
                            double resolution = 1e-12, double gap_tolerance = 1e-9);

struct ConvexityWitness {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double margin = 0.0;
};

struct ConvexityCertificate {
  bool pass = true;
  bool primal_pass = true;  ///< midpoint strictness on every usable pair
  bool dual_pass = true;    ///< L differentiable at every grid point
  double min_margin = 0.0;  ///< +inf when no pair was usable
  int pairs_used = 0;
  int pairs_skipped = 0;    ///< outside the domain or ascent did not converge
  std::vector<ConvexityWitness> witnesses;  ///< pairs with margin <= threshold
  std::vector<Eigen::VectorXd> kink_points; ///< grid points where L has a kink
  double margin_threshold = 0.0;
  std::string diagnostic;
};

/// Essential strict convexity of I = L^*, judged twice: strict midpoint
/// convexity of I on the sampled pairs, and differentiability of L on
/// `t_grid` (consecutive grid points whose maximizer sets differ count as a
/// kink between them). The two verdicts must agree.
ConvexityCertificate ess_strict_convexity_check(
    const LogMgf& lm, const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
    const std::vector<Eigen::VectorXd>& t_grid, double margin_threshold = 1e-11);

}  // namespace thermo
