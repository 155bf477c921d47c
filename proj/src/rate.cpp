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


#include "thermo/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "thermo/block.hpp"
#include "thermo/errors.hpp"
#include "thermo/parallel.hpp"
#include "thermo/pressure.hpp"

namespace thermo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Edge-flow parametrisation of invariant Markov measures with memory L: a
// flow q on the edges of the nontrivial components of the L-block graph,
// conserved at every state and of total mass 1.
struct FlowProblem {
  std::vector<int> edge;          // block edge per variable
  std::vector<int> source;        // local state per variable
  std::vector<int> slot;          // component slot per variable
  int states = 0;
  Eigen::VectorXd base;           // f per variable
  Eigen::MatrixXd moments;        // f_k per variable, one row per direction
  Eigen::MatrixXd null_basis;     // orthonormal basis of the conservation kernel
  Eigen::VectorXd start;          // strictly positive feasible flow

  double objective(const Eigen::VectorXd& q, const Eigen::VectorXd& x, double rho) const {
    if (q.minCoeff() <= 0.0) return kInf;
    const Eigen::VectorXd pi = marginal(q);
    double neg_entropy = 0.0;
    for (Eigen::Index e = 0; e < q.size(); ++e) {
      neg_entropy += q[e] * std::log(q[e] / pi[source[e]]);
    }
    const Eigen::VectorXd r = moments * q - x;
    return neg_entropy - base.dot(q) + 0.5 * rho * r.squaredNorm();
  }

  Eigen::VectorXd marginal(const Eigen::VectorXd& q) const {
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(states);
    for (Eigen::Index e = 0; e < q.size(); ++e) pi[source[e]] += q[e];
    return pi;
  }

  // -h(q) - <f, q>, the unpenalised objective.
  double free_energy(const Eigen::VectorXd& q) const {
    const Eigen::VectorXd pi = marginal(q);
    double neg_entropy = 0.0;
    for (Eigen::Index e = 0; e < q.size(); ++e) {
      if (q[e] > 0.0) neg_entropy += q[e] * std::log(q[e] / pi[source[e]]);
    }
    return neg_entropy - base.dot(q);
  }
};

FlowProblem build_flow_problem(const RateFunction& rate, const BlockPresentation& block) {
  FlowProblem fp;
  std::vector<int> local(block.state_count(), -1);
  for (int u = 0; u < block.state_count(); ++u) {
    if (block.component_slot(u) >= 0) local[u] = fp.states++;
  }
  const Eigen::VectorXd base_values = block.edge_values(rate.base());
  std::vector<Eigen::VectorXd> dir_values;
  for (const auto& g : rate.directions()) dir_values.push_back(block.edge_values(g));

  const auto& comps = block.components();
  for (std::size_t s = 0; s < comps.size(); ++s) {
    for (int e : comps[s].edges) {
      fp.edge.push_back(e);
      fp.source.push_back(local[block.edges()[e].from]);
      fp.slot.push_back(static_cast<int>(s));
    }
  }
  const auto m = static_cast<Eigen::Index>(fp.edge.size());
  fp.base.resize(m);
  fp.moments.resize(rate.dimension(), m);
  Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(fp.states + 1, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& e = block.edges()[fp.edge[i]];
    fp.base[i] = base_values[fp.edge[i]];
    for (int k = 0; k < rate.dimension(); ++k) fp.moments(k, i) = dir_values[k][fp.edge[i]];
    constraints(local[e.from], i) -= 1.0;
    constraints(local[e.to], i) += 1.0;
    constraints(fp.states, i) = 1.0;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  }
  fp.null_basis = svd.matrixV().rightCols(m - rank);

  // Equal mixture of the maximal-entropy flows of the components.
  fp.start = Eigen::VectorXd::Zero(m);
  for (std::size_t s = 0; s < comps.size(); ++s) {
    const MarkovMeasure parry = parry_measure(block, static_cast<int>(s));
    for (Eigen::Index i = 0; i < m; ++i) {
      if (fp.slot[i] != static_cast<int>(s)) continue;
      const auto& e = block.edges()[fp.edge[i]];
      const int u = parry.state_index(block.state(e.from));
      const int v = parry.state_index(block.state(e.to));
      fp.start[i] = parry.stationary()[u] * parry.transition()(u, v) /
                    static_cast<double>(comps.size());
    }
  }
  return fp;
}

std::optional<MarkovMeasure> flow_to_measure(const BlockPresentation& block,
                                             const FlowProblem& fp, const Eigen::VectorXd& q) {
  constexpr double kMassFloor = 1e-14;
  const auto& comps = block.components();
  std::vector<Word> words;
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<Eigen::VectorXd> weights;
  for (std::size_t s = 0; s < comps.size(); ++s) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (fp.slot[i] == static_cast<int>(s)) mass += q[i];
    }
    if (mass <= kMassFloor) continue;
    const auto n = static_cast<Eigen::Index>(comps[s].states.size());
    std::vector<int> local(block.state_count(), -1);
    for (Eigen::Index j = 0; j < n; ++j) local[comps[s].states[j]] = static_cast<int>(j);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (fp.slot[i] != static_cast<int>(s)) continue;
      const auto& e = block.edges()[fp.edge[i]];
      p(local[e.from], local[e.to]) = std::max(q[i], 0.0);
    }
    for (Eigen::Index u = 0; u < n; ++u) {
      const double row = p.row(u).sum();
      if (row > 0.0) {
        p.row(u) /= row;
      } else {
        // A state the flow never visits: any admissible continuation will do.
        for (int e : block.out_edges(comps[s].states[u])) {
          const int v = local[block.edges()[e].to];
          if (v >= 0) p(u, v) = 1.0;
        }
        p.row(u) /= p.row(u).sum();
      }
    }
    for (int st : comps[s].states) words.push_back(block.state(st));
    weights.push_back(mass * stationary_distribution(p));
    blocks.push_back(std::move(p));
  }
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(total, total);
  Eigen::VectorXd pi(total);
  Eigen::Index at = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::Index n = blocks[b].rows();
    p.block(at, at, n, n) = blocks[b];
    pi.segment(at, n) = weights[b];
    at += n;
  }
  pi /= pi.sum();
  try {
    return MarkovMeasure(block.sft().alphabet_size(), block.word_length(), std::move(words),
                         std::move(p), std::move(pi));
  } catch (const InputError&) {
    return std::nullopt;
  }
}

}  // namespace

double level2_rate(const Sft& sft, const Potential& f, const MarkovMeasure& mu) {
  check_support(sft, mu);
  check_potential(sft, f);
  return pressure_spectral(sft, f).pressure - entropy(mu) - expectation(mu, f);
}

RateFunction::RateFunction(Sft sft, Potential base, std::vector<Potential> directions)
    : lm_(std::move(sft), std::move(base), std::move(directions)) {}

ExtendedReal rate_dual(const RateFunction& rate, const Eigen::VectorXd& x,
                       const LegendreOptions& opts) {
  const ConjugateResult r = legendre(rate.log_mgf(), x, opts);
  if (!r.converged) {
    throw ConvergenceError("Legendre ascent stopped after " + std::to_string(r.iterations) +
                           " iterations with residual " + std::to_string(r.residual));
  }
  if (r.value.is_finite()) return std::max(r.value.value(), 0.0);
  return r.value;
}

PrimalResult rate_primal(const RateFunction& rate, const Eigen::VectorXd& x,
                         const PrimalOptions& opts) {
  if (x.size() != rate.dimension()) throw InputError("target point has the wrong dimension");
  int depth = rate.base().depth();
  for (const auto& g : rate.directions()) depth = std::max(depth, g.depth());
  const BlockPresentation block(rate.sft(), block_length_for_depth(depth));
  const FlowProblem fp = build_flow_problem(rate, block);
  const auto& z = fp.null_basis;

  PrimalResult out;
  Eigen::VectorXd q = fp.start;
  for (double rho = opts.initial_penalty; rho <= opts.final_penalty * (1.0 + 1e-12);
       rho *= opts.penalty_growth) {
    for (int step = 0; step < opts.max_newton_steps && z.cols() > 0; ++step) {
      const Eigen::VectorXd pi = fp.marginal(q);
      const Eigen::VectorXd r = fp.moments * q - x;
      Eigen::VectorXd grad(q.size());
      for (Eigen::Index e = 0; e < q.size(); ++e) {
        grad[e] = std::log(q[e] / pi[fp.source[e]]) - fp.base[e];
      }
      grad += rho * fp.moments.transpose() * r;

      Eigen::MatrixXd hess = rho * fp.moments.transpose() * fp.moments;
      hess.diagonal() += q.cwiseInverse();
      for (Eigen::Index a = 0; a < q.size(); ++a) {
        for (Eigen::Index b = 0; b < q.size(); ++b) {
          if (fp.source[a] == fp.source[b]) hess(a, b) -= 1.0 / pi[fp.source[a]];
        }
      }
      Eigen::MatrixXd reduced = z.transpose() * hess * z;
      const Eigen::VectorXd rgrad = z.transpose() * grad;
      // Mixture weights between components are a flat direction of the
      // entropy; a small ridge keeps the system definite.
      const double scale = std::max(1.0, reduced.diagonal().cwiseAbs().maxCoeff());
      double ridge = 1e-13 * scale;
      Eigen::LDLT<Eigen::MatrixXd> ldlt;
      for (int tries = 0; tries < 20; ++tries) {
        Eigen::MatrixXd shifted = reduced;
        shifted.diagonal().array() += ridge;
        ldlt.compute(shifted);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
            ldlt.vectorD().minCoeff() > 0.0) {
          break;
        }
        ridge *= 10.0;
      }
      const Eigen::VectorXd dq = z * ldlt.solve(-rgrad);
      const double decrement = -grad.dot(dq);
      ++out.newton_steps;
      if (!(decrement > 1e-18)) break;

      double alpha = 1.0;
      for (Eigen::Index e = 0; e < q.size(); ++e) {
        if (dq[e] < 0.0) alpha = std::min(alpha, 0.99 * q[e] / -dq[e]);
      }
      const double phi = fp.objective(q, x, rho);
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
        const Eigen::VectorXd trial = q + alpha * dq;
        if (fp.objective(trial, x, rho) <= phi - 1e-4 * alpha * decrement) {
          q = trial;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }

  out.residual = fp.moments.rows() > 0 ? (fp.moments * q - x).cwiseAbs().maxCoeff() : 0.0;
  if (out.residual > opts.feasibility_tolerance) {
    out.value = ExtendedReal::PlusInfinity();
    return out;
  }
  out.value = std::max(rate.base_pressure() + fp.free_energy(q), 0.0);
  out.argmin = flow_to_measure(block, fp, q);
  return out;
}

DualityAudit duality_audit(const RateFunction& rate, const std::vector<Eigen::VectorXd>& grid,
                           double tolerance) {
  DualityAudit audit;
  audit.tolerance = tolerance;
  audit.rows.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    AuditRow row;
    row.x = grid[i];
    row.dual = rate_dual(rate, grid[i]);
    row.primal = rate_primal(rate, grid[i]).value;
    if (row.dual.is_finite() && row.primal.is_finite()) {
      row.gap = std::abs(row.dual.value() - row.primal.value());
    } else {
      row.gap = row.dual.kind() == row.primal.kind() ? 0.0 : kInf;
    }
    audit.rows[i] = std::move(row);
  });
  for (const auto& row : audit.rows) audit.max_gap = std::max(audit.max_gap, row.gap);

  audit.min_convexity_margin = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const Eigen::VectorXd mid = 0.5 * (grid[i] + grid[j]);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if ((grid[k] - mid).cwiseAbs().maxCoeff() > 1e-12) continue;
        const auto& a = audit.rows[i].dual;
        const auto& b = audit.rows[j].dual;
        const auto& c = audit.rows[k].dual;
        if (!a.is_finite() || !b.is_finite() || !c.is_finite()) continue;
        audit.min_convexity_margin =
            std::min(audit.min_convexity_margin, 0.5 * (a.value() + b.value()) - c.value());
      }
    }
  }
  audit.convex = !(audit.min_convexity_margin < -kConvexitySlack);
  audit.pass = audit.max_gap <= tolerance && audit.convex;
  return audit;
}

}  // namespace thermo
