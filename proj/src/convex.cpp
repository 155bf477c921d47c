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


#include "thermo/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "thermo/errors.hpp"
#include "thermo/parallel.hpp"

namespace thermo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Convex function of one variable along a ray: phi(s) = L(t + s d) - <t + s d, x>.
struct Ray {
  const LogMgf& lm;
  const Eigen::VectorXd& t;
  const Eigen::VectorXd& d;
  const Eigen::VectorXd& x;

  // Right derivative at s.
  double slope(double s, LocalData* out = nullptr) const {
    LocalData ld = local_data(lm, t + s * d);
    double best = -kInf;
    for (const auto& v : ld.vertices) best = std::max(best, (v - x).dot(d));
    if (out) *out = std::move(ld);
    return best;
  }
};

// Smallest s in (lo, hi] with nonnegative right derivative, given
// slope(lo) < 0 <= slope(hi).
double bisect_slope(const Ray& ray, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ray.slope(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

bool same_set(const std::vector<int>& a, const std::vector<int>& b) { return a == b; }

}  // namespace

LogMgf::LogMgf(Sft sft, Potential base, std::vector<Potential> directions)
    : sft_(std::move(sft)), base_(std::move(base)), directions_(std::move(directions)) {
  check_potential(sft_, base_);
  for (const auto& g : directions_) check_potential(sft_, g);
  base_pressure_ = pressure_spectral(sft_, tilted(Eigen::VectorXd::Zero(dimension()))).pressure;
}

Potential LogMgf::tilted(const Eigen::VectorXd& t) const {
  if (t.size() != dimension()) {
    throw InputError("point has dimension " + std::to_string(t.size()) + ", expected " +
                     std::to_string(dimension()));
  }
  return linear_combination(base_, directions_, t);
}

LocalData local_data(const LogMgf& lm, const Eigen::VectorXd& t) {
  const PressureReport report = pressure_spectral(lm.sft(), lm.tilted(t));
  LocalData out;
  out.value = report.pressure - lm.base_pressure();
  out.maximizers = report.maximizers;
  for (const auto& mu : report.equilibrium_states) {
    Eigen::VectorXd v(lm.dimension());
    for (int k = 0; k < lm.dimension(); ++k) v[k] = expectation(mu, lm.directions()[k]);
    out.vertices.push_back(std::move(v));
  }
  for (std::size_t i = 1; i < out.vertices.size() && out.smooth; ++i) {
    if (lm.dimension() > 0 &&
        (out.vertices[i] - out.vertices[0]).cwiseAbs().maxCoeff() > kSmoothTolerance) {
      out.smooth = false;
    }
  }
  return out;
}

double eval_L(const LogMgf& lm, const Eigen::VectorXd& t) {
  if (t.size() == lm.dimension() && t.isZero(0.0)) return 0.0;
  return local_data(lm, t).value;
}

Gradient grad_L(const LogMgf& lm, const Eigen::VectorXd& t) {
  LocalData ld = local_data(lm, t);
  if (ld.smooth) return ld.vertices.front();
  return KinkWitness{std::move(ld.vertices)};
}

Eigen::VectorXd min_norm_point(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) throw InputError("min-norm point of an empty set");
  const Eigen::Index dim = points.front().size();
  const int k = static_cast<int>(points.size());
  Eigen::VectorXd best = points.front();
  if (k == 1) return best;
  if (k <= 12) {
    // Every face of the simplex: minimise |P w| subject to sum w = 1, keep
    // feasible (w >= 0) solutions.
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < k; ++i) {
        if (mask & (1u << i)) idx.push_back(i);
      }
      const auto s = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd p(dim, s);
      for (Eigen::Index j = 0; j < s; ++j) p.col(j) = points[idx[j]];
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
      kkt.topLeftCorner(s, s) = p.transpose() * p;
      kkt.topRightCorner(s, 1).setOnes();
      kkt.bottomLeftCorner(1, s).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs[s] = 1.0;
      const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd w = sol.head(s);
      if (w.minCoeff() < -1e-12 || std::abs(w.sum() - 1.0) > 1e-9) continue;
      const Eigen::VectorXd candidate = p * w.cwiseMax(0.0) / w.cwiseMax(0.0).sum();
      if (candidate.norm() < best.norm()) best = candidate;
    }
    return best;
  }
  // Frank-Wolfe with exact line search for larger vertex sets.
  for (int it = 0; it < 100'000; ++it) {
    int s = 0;
    for (int i = 1; i < k; ++i) {
      if (points[i].dot(best) < points[s].dot(best)) s = i;
    }
    const Eigen::VectorXd step = points[s] - best;
    const double denom = step.squaredNorm();
    if (denom == 0.0 || -best.dot(step) <= 1e-16) break;
    best += std::clamp(-best.dot(step) / denom, 0.0, 1.0) * step;
  }
  return best;
}

ConjugateResult legendre(const LogMgf& lm, const Eigen::VectorXd& x,
                         const LegendreOptions& opts) {
  const int n = lm.dimension();
  if (x.size() != n) throw InputError("target point has the wrong dimension");
  ConjugateResult res;
  res.maximizer = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    res.value = 0.0;
    res.converged = true;
    return res;
  }

  Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
  LocalData cur = local_data(lm, t);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  const auto objective = [&](const LocalData& ld, const Eigen::VectorXd& at) {
    return ld.value - at.dot(x);
  };

  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    if (t.norm() > opts.escape_norm) {
      const Eigen::VectorXd u = t.normalized();
      double derivative = -kInf;
      for (const auto& v : cur.vertices) derivative = std::max(derivative, v.dot(u));
      res.boundary = true;
      res.converged = true;
      res.maximizer = t;
      res.residual = x.dot(u) - derivative;
      res.value = res.residual > opts.slope_tolerance ? ExtendedReal::PlusInfinity()
                                                      : ExtendedReal(-objective(cur, t));
      return res;
    }

    std::vector<Eigen::VectorXd> shifted;
    for (const auto& v : cur.vertices) shifted.push_back(v - x);
    const Eigen::VectorXd w = cur.smooth ? shifted.front() : min_norm_point(shifted);
    res.residual = w.norm();
    if (res.residual <= opts.tolerance) {
      res.converged = true;
      res.at_kink = !cur.smooth;
      break;
    }

    if (!cur.smooth) {
      // Steepest descent of L - <., x> at a kink is along -w.
      const Eigen::VectorXd d = -w;
      const Ray ray{lm, t, d, x};
      double lo = 0.0;
      double hi = 1.0;
      while (ray.slope(hi) < 0.0 && (t + hi * d).norm() <= opts.escape_norm) {
        lo = hi;
        hi *= 2.0;
      }
      const double s = ray.slope(hi) < 0.0 ? hi : bisect_slope(ray, lo, hi);
      t += s * d;
      cur = local_data(lm, t);
      h.setIdentity();
      continue;
    }

    const Eigen::VectorXd& g = w;
    Eigen::VectorXd p = -h * g;
    if (g.dot(p) >= 0.0) {
      h.setIdentity();
      p = -g;
    }
    const double f0 = objective(cur, t);
    bool accepted = false;
    bool restarted = false;
    Eigen::VectorXd t_new;
    LocalData next;
    for (double alpha = 1.0; alpha > 1e-20; alpha *= 0.5) {
      t_new = t + alpha * p;
      next = local_data(lm, t_new);
      if (!same_set(next.maximizers, cur.maximizers)) {
        // The step crosses a change of maximizing component: minimise exactly
        // along the segment.
        const Ray ray{lm, t, p, x};
        const double s = ray.slope(alpha) < 0.0 ? alpha : bisect_slope(ray, 0.0, alpha);
        t += s * p;
        cur = local_data(lm, t);
        h.setIdentity();
        restarted = true;
        break;
      }
      const double f1 = objective(next, t_new);
      if (f1 <= f0 + 1e-4 * alpha * g.dot(p)) {
        accepted = true;
        break;
      }
      // Near the optimum the objective is flat to rounding; a strict drop in
      // the gradient norm is still progress.
      if (next.smooth && (next.vertices.front() - x).norm() < g.norm() &&
          f1 <= f0 + 1e-13 * std::max(1.0, std::abs(f0))) {
        accepted = true;
        break;
      }
    }
    if (restarted) continue;
    if (!accepted) {
      if (h.isIdentity()) break;
      h.setIdentity();
      continue;
    }
    if (next.smooth) {
      const Eigen::VectorXd s = t_new - t;
      const Eigen::VectorXd y = (next.vertices.front() - x) - g;
      const double sy = s.dot(y);
      if (sy > 1e-300) {
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        h = (id - rho * s * y.transpose()) * h * (id - rho * y * s.transpose()) +
            rho * s * s.transpose();
      }
    } else {
      h.setIdentity();
    }
    t = std::move(t_new);
    cur = std::move(next);
  }
  res.maximizer = t;
  res.value = -objective(cur, t);
  return res;
}

std::vector<Kink> kink_scan(const Sft& sft, const Potential& f, const Potential& g,
                            double t_lo, double t_hi, int grid, double resolution,
                            double gap_tolerance) {
  if (grid < 2) throw InputError("kink scan needs at least 2 grid points");
  if (!(t_hi > t_lo)) throw InputError("kink scan interval is empty");
  check_potential(sft, f);
  check_potential(sft, g);
  const std::vector<Potential> dir{g};
  const auto report_at = [&](double t) {
    return pressure_spectral(sft, linear_combination(f, dir, Eigen::VectorXd::Constant(1, t)));
  };

  std::vector<double> ts(grid);
  std::vector<PressureReport> reports(grid);
  for (int i = 0; i < grid; ++i) ts[i] = t_lo + (t_hi - t_lo) * i / (grid - 1);
  parallel_for(grid, [&](std::size_t i) { reports[i] = report_at(ts[i]); });

  std::vector<Kink> kinks;
  for (int i = 0; i < grid; ++i) {
    const auto d = directional_derivatives(reports[i], g);
    if (d.right - d.left > gap_tolerance) kinks.push_back({ts[i], d.left, d.right});
    if (i + 1 == grid) continue;
    const auto& ma = reports[i].maximizers;
    const auto& mb = reports[i + 1].maximizers;
    if (ma.size() != 1 || mb.size() != 1 || ma == mb) continue;

    // Bisect on the sign of the difference between the two branches' log
    // Perron values, which crosses zero exactly at the switch.
    const auto branch_gap = [&](const PressureReport& r) {
      double va = 0.0;
      double vb = 0.0;
      for (const auto& c : r.per_component) {
        if (c.component == ma.front()) va = c.log_perron;
        if (c.component == mb.front()) vb = c.log_perron;
      }
      return va - vb;
    };
    double a = ts[i];
    double b = ts[i + 1];
    PressureReport left = reports[i];
    PressureReport right = reports[i + 1];
    while (b - a > resolution) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      PressureReport r = report_at(mid);
      if (branch_gap(r) > 0.0) {
        a = mid;
        left = std::move(r);
      } else {
        b = mid;
        right = std::move(r);
      }
    }
    Kink k{0.5 * (a + b), 0.0, 0.0};
    k.left = directional_derivatives(left, g).left;
    k.right = directional_derivatives(right, g).right;
    if (std::abs(k.right - k.left) > gap_tolerance) kinks.push_back(k);
  }
  return kinks;
}

ConvexityCertificate ess_strict_convexity_check(
    const LogMgf& lm, const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
    const std::vector<Eigen::VectorXd>& t_grid, double margin_threshold) {
  ConvexityCertificate cert;
  cert.margin_threshold = margin_threshold;
  cert.min_margin = kInf;
  if (lm.dimension() == 0) {
    cert.diagnostic = "no directions: vacuous";
    return cert;
  }

  struct PairOutcome {
    bool usable = false;
    double margin = 0.0;
  };
  std::vector<PairOutcome> outcomes(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    if ((x - y).cwiseAbs().maxCoeff() == 0.0) return;
    const ConjugateResult rx = legendre(lm, x);
    const ConjugateResult ry = legendre(lm, y);
    const ConjugateResult rm = legendre(lm, 0.5 * (x + y));
    for (const auto* r : {&rx, &ry, &rm}) {
      if (!r->converged || r->boundary || !r->value.is_finite()) return;
    }
    outcomes[i] = {true, 0.5 * (rx.value.value() + ry.value.value()) - rm.value.value()};
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!outcomes[i].usable) {
      ++cert.pairs_skipped;
      continue;
    }
    ++cert.pairs_used;
    cert.min_margin = std::min(cert.min_margin, outcomes[i].margin);
    if (outcomes[i].margin <= margin_threshold) {
      cert.primal_pass = false;
      cert.witnesses.push_back({pairs[i].first, pairs[i].second, outcomes[i].margin});
    }
  }

  std::vector<LocalData> local(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { local[i] = local_data(lm, t_grid[i]); });
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!local[i].smooth) {
      cert.dual_pass = false;
      cert.kink_points.push_back(t_grid[i]);
    } else if (i + 1 < t_grid.size() && local[i + 1].smooth &&
               local[i].maximizers != local[i + 1].maximizers) {
      cert.dual_pass = false;
      cert.kink_points.push_back(0.5 * (t_grid[i] + t_grid[i + 1]));
    }
  }

  cert.pass = cert.primal_pass && cert.dual_pass;
  if (cert.primal_pass != cert.dual_pass) {
    cert.diagnostic = cert.primal_pass
                          ? "midpoint test found strict convexity but L has a kink"
                          : "midpoint test found a flat segment but L is differentiable";
  } else {
    cert.diagnostic = cert.pass ? "strictly convex on samples; L differentiable on grid"
                                : "flat segment of I matched by a kink of L";
  }
  return cert;
}

}  // namespace thermo
