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


// Acceptance suite: one PASS/FAIL line per criterion with the measured
// quantity, its threshold and the wall time against the runtime budget.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thermo/convex.hpp"
#include "thermo/ldp.hpp"
#include "thermo/markov.hpp"
#include "thermo/pressure.hpp"
#include "thermo/rate.hpp"
#include "thermo/schauder.hpp"

namespace {

using namespace thermo;
using Vec = Eigen::VectorXd;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

Vec v1(double a) { return Vec::Constant(1, a); }

// Largest admissible growth of n |gap| between an early and a late window of n.
constexpr double kGrowthAllowance = 1.25;

struct System {
  Sft sft;
  Eigen::MatrixXi transitions;
  Potential f;
};

// Twenty random irreducible systems, alphabet 2..4, potentials of depth 1..3
// with entries uniform in [-2, 2]. Fixed seed so every run sees the same suite.
std::vector<System> suite() {
  std::mt19937_64 rng(20260101);
  std::vector<System> out;
  for (int i = 0; i < 20; ++i) {
    const int m = 2 + i % 3;
    const int depth = 1 + (i / 3) % 3;
    const Eigen::MatrixXi a = oracle::random_irreducible(rng, m);
    out.push_back({Sft(a), a, oracle::random_potential(rng, m, depth)});
  }
  return out;
}

Outcome variational_principle() {
  double worst = 0.0;
  double oracle_gap = 0.0;
  for (const System& s : suite()) {
    const PressureReport r = pressure_spectral(s.sft, s.f);
    if (r.equilibrium_states.size() != 1) return {false, "irreducible system without a unique state"};
    const MarkovMeasure& mu = r.equilibrium_states[0];
    worst = std::max(worst, std::abs(r.pressure - (entropy(mu) + expectation(mu, s.f))));
    oracle_gap = std::max(oracle_gap, std::abs(r.pressure - oracle::pressure(s.transitions, s.f)));
  }
  return {worst <= 1e-9 && oracle_gap <= 1e-9,
          fmt("max |P - h - mu(f)| = %.2e (<= 1e-9), max |P - oracle| = %.2e", worst, oracle_gap)};
}

Outcome pressure_routes() {
  double constant = 0.0;
  double late = 0.0;
  double early = 0.0;
  for (const System& s : suite()) {
    const double p = pressure_spectral(s.sft, s.f).pressure;
    for (int n = 8; n <= 20; ++n) {
      const double c = n * std::abs(pressure_direct(s.sft, s.f, n) - p);
      if (!std::isfinite(c)) return {false, "non-finite direct pressure"};
      constant = std::max(constant, c);
      (n <= 12 ? early : late) = std::max(n <= 12 ? early : late, c);
    }
  }
  // An O(1/n) gap keeps n |P_n - P| from growing; linear growth would show up
  // as late/early near 20/12.
  return {std::isfinite(constant) && late <= kGrowthAllowance * early + 1e-9,
          fmt("C = max n |P_n - P| = %.3e (finite), C[13..20] / C[8..12] = %.3f (<= 1.25)", constant,
              early > 0 ? late / early : 0.0)};
}

Outcome finite_mgf_identity() {
  std::mt19937_64 rng(3);
  double constant = 0.0;
  double ratio = 0.0;
  for (const System& s : suite()) {
    const Potential g = oracle::random_potential(rng, s.sft.alphabet_size(), 1 + rng() % 3);
    const double limit = pressure_spectral(s.sft, s.f + g).pressure - pressure_spectral(s.sft, s.f).pressure;
    double c_early = 0.0;
    double c_late = 0.0;
    for (int n = 8; n <= 40; ++n) {
      const double c = n * std::abs(finite_n_mgf(s.sft, s.f, g, n) - limit);
      constant = std::max(constant, c);
      (n <= 16 ? c_early : c_late) = std::max(n <= 16 ? c_early : c_late, c);
    }
    if (c_early > 1e-12) ratio = std::max(ratio, c_late / c_early);
  }
  double exact = 0.0;
  for (int m = 2; m <= 4; ++m) {
    const Potential f = oracle::random_potential(rng, m, 1);
    const Potential g = oracle::random_potential(rng, m, 1);
    const double limit = pressure_spectral(Sft::FullShift(m), f + g).pressure -
                         pressure_spectral(Sft::FullShift(m), f).pressure;
    for (int n = 8; n <= 40; ++n) {
      exact = std::max(exact, std::abs(finite_n_mgf(Sft::FullShift(m), f, g, n) - limit));
    }
  }
  return {std::isfinite(constant) && ratio <= kGrowthAllowance && exact <= 1e-12,
          fmt("C = %.3e (finite), max C[17..40] / C[8..16] = %.3f (<= 1.25), full-shift depth-1 error %.2e",
              constant, ratio, exact)};
}

Outcome gradient_check() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim) {
    const int m = 3;
    const Sft s(oracle::random_irreducible(rng, m));
    std::vector<Potential> dirs;
    for (int k = 0; k < dim; ++k) dirs.push_back(oracle::random_potential(rng, m, 1 + k % 2));
    const LogMgf lm(s, oracle::random_potential(rng, m, 2), dirs);
    for (int trial = 0; trial < 50; ++trial) {
      const Vec t = Vec::NullaryExpr(dim, [&] { return u(rng); });
      const Gradient g = grad_L(lm, t);
      if (!std::holds_alternative<Vec>(g)) return {false, "kink on an irreducible system"};
      Vec fd(dim);
      for (int k = 0; k < dim; ++k) {
        Vec e = Vec::Zero(dim);
        e[k] = 1e-5;
        fd[k] = (eval_L(lm, t + e) - eval_L(lm, t - e)) / 2e-5;
      }
      worst = std::max(worst, (std::get<Vec>(g) - fd).norm() / fd.norm());
    }
  }
  return {worst <= 1e-6, fmt("max relative error %.2e over 150 points (<= 1e-6)", worst)};
}

Outcome duality() {
  const RateFunction coin(Sft::FullShift(2), Potential::Zero(2), {Potential::SymbolIndicator(2, {1})});
  std::vector<Vec> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(v1(0.05 * i));
  const DualityAudit a = duality_audit(coin, grid);

  Eigen::Matrix3i t;
  t << 1, 1, 0, 1, 0, 1, 1, 1, 1;
  const RateFunction two(Sft(t), Potential::Zero(3),
                         {Potential::WordIndicator(3, {0, 1}), Potential::WordIndicator(3, {2, 2})});
  std::vector<Vec> interior;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      interior.push_back(std::get<Vec>(grad_L(two.log_mgf(), Eigen::Vector2d(-1.0 + 0.5 * i, -1.0 + 0.5 * j))));
    }
  }
  const DualityAudit b = duality_audit(two, interior);
  return {a.pass && b.pass && a.max_gap <= 1e-6 && b.max_gap <= 1e-6,
          fmt("Bernoulli grid max gap %.2e, 2-direction 5x5 max gap %.2e (<= 1e-6)", a.max_gap, b.max_gap)};
}

Outcome analytic_conjugate() {
  const RateFunction coin(Sft::FullShift(2), Potential::Zero(2), {Potential::SymbolIndicator(2, {1})});
  const double value = rate_dual(coin, v1(0.75)).value();
  const double closed = oracle::kLog2 + 0.75 * std::log(0.75) + 0.25 * std::log(0.25);
  const double grid = oracle::grid_conjugate(
      [](double s) { return oracle::softplus(s) - oracle::kLog2; }, 0.75, -30.0, 30.0, 1e-4);
  const double e1 = std::abs(value - closed);
  const double e2 = std::abs(value - grid);
  const double e3 = std::abs(value - oracle::kBinaryConjugateAt075);
  return {e1 <= 1e-8 && e2 <= 1e-8 && e3 <= 1e-8,
          fmt("|dual - closed form| = %.2e, |dual - grid oracle| = %.2e, |dual - frozen| = %.2e (<= 1e-8)",
              e1, e2, e3)};
}

Outcome dichotomy() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  const Potential a_ind = Potential::SymbolIndicator(2, {1});
  const GateauxReport gat = gateaux_check(Sft::FullShift(2), Potential::Zero(2), {a_ind, Potential::Zero(2)});
  const LogMgf coin(Sft::FullShift(2), Potential::Zero(2), {a_ind});
  std::vector<std::pair<Vec, Vec>> pairs;
  for (int i = 0; i < 100; ++i) pairs.emplace_back(v1(u(rng)), v1(u(rng)));
  std::vector<Vec> t_grid;
  for (int i = 0; i <= 40; ++i) t_grid.push_back(v1(-2.0 + 0.1 * i));
  const ConvexityCertificate irr = ess_strict_convexity_check(coin, pairs, t_grid);
  const bool irreducible_ok = gat.differentiable && irr.pass && irr.min_margin > 0.0;

  const Sft u23 = Sft::DisjointUnion(Sft::FullShift(2), Sft::FullShift(3));
  const Potential pair = Potential::SymbolIndicator(5, {0, 1});
  const auto kinks = kink_scan(u23, Potential::Zero(5), pair, -2.0, 2.0, 81);
  const double kink_err = kinks.size() == 1 ? std::abs(kinks[0].t - oracle::kLogThreeHalves) : 1.0;
  const PressureReport at = pressure_spectral(u23, (kinks.empty() ? 0.0 : kinks[0].t) * pair);
  const RateFunction rate(u23, Potential::Zero(5), {pair});
  double affine = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.05 * i;
    const ExtendedReal v = rate_dual(rate, v1(x));
    affine = std::max(affine, v.is_finite() ? std::abs(v.value() - x * oracle::kLogThreeHalves) : 1.0);
  }
  double bound = 0.0;
  if (at.equilibrium_states.size() == 2) {
    const auto r = ergodic_approximation(
        u23, mix_disjoint(at.equilibrium_states[0], at.equilibrium_states[1], 0.5), 1e-3);
    if (const auto* c = std::get_if<FailureCertificate>(&r)) bound = c->tv_lower_bound;
  }
  const bool reducible_ok = kink_err <= 1e-9 && !at.unique && affine <= 1e-9 && bound >= 0.5 - 1e-9;
  return {irreducible_ok && reducible_ok,
          fmt("irreducible margin %.2e; kink error %.2e, affine error %.2e (<= 1e-9)", irr.min_margin,
              kink_err, affine) +
              fmt(", non-unique at t* = %.0f, certificate %.6f (>= 0.5)", at.unique ? 0 : 1, bound)};
}

Outcome level2_zero_set() {
  std::mt19937_64 rng(8);
  double at_eq = 0.0;
  double min_away = std::numeric_limits<double>::infinity();
  int measures = 0;
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (int sys = 0; sys < 5; ++sys) {
    const int m = 2 + sys % 3;
    Eigen::MatrixXi a = oracle::random_irreducible(rng, m);
    // A single cycle carries exactly one invariant measure; skip it.
    while (a.rowwise().sum().maxCoeff() < 2) a = oracle::random_irreducible(rng, m);
    const Sft s(a);
    const Potential f = oracle::random_potential(rng, m, 1);
    const MarkovMeasure eq = pressure_spectral(s, f).equilibrium_states.front();
    at_eq = std::max(at_eq, std::abs(level2_rate(s, f, eq)));
    for (int k = 0, draws = 0; k < 10 && draws < 10'000; ++k, ++draws) {
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) p(i, j) = a(i, j) ? gamma(rng) : 0.0;
        p.row(i) /= p.row(i).sum();
      }
      if ((p - eq.transition()).cwiseAbs().maxCoeff() < 1e-2) {
        --k;
        continue;
      }
      min_away = std::min(min_away, level2_rate(s, f, markov_from_transition(s, 1, p)));
      ++measures;
    }
  }
  return {at_eq <= 1e-10 && min_away >= 1e-4 && measures == 50,
          fmt("rate at equilibrium %.2e (<= 1e-10), min over %.0f other measures %.3e (>= 1e-4)", at_eq,
              measures, min_away)};
}

Outcome gartner() {
  const Potential ones = Potential::SymbolIndicator(2, {1});
  std::vector<int> schedule;
  for (int n = 8; n <= 20; ++n) schedule.push_back(n);
  const GartnerReport r = gartner_audit(Sft::FullShift(2), Potential::Zero(2), Potential::Zero(2), {ones},
                                        schedule, {v1(0.6), v1(0.75), v1(0.9)}, 0.02);
  // The exact route must reproduce binomial tails.
  double tail_err = 0.0;
  for (const auto& row : r.rows) {
    if (row.empirical.is_minus_infinity()) continue;
    std::vector<double> logs;
    for (int j = 0; j <= row.n; ++j) {
      if (std::abs(static_cast<double>(j) / row.n - row.x[0]) <= 0.02 + 1e-12) {
        logs.push_back(std::lgamma(row.n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(row.n - j + 1.0));
      }
    }
    double top = *std::max_element(logs.begin(), logs.end());
    double z = 0.0;
    for (double l : logs) z += std::exp(l - top);
    tail_err = std::max(tail_err, std::abs((top + std::log(z)) / row.n - oracle::kLog2 - row.empirical.value()));
  }
  return {r.hypothesis && r.pass && tail_err <= 1e-12,
          fmt("max discrepancy %.3e <= tol %.3e, binomial tail error %.2e", r.max_discrepancy, r.tolerance,
              tail_err)};
}

Outcome schauder() {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int m = 2 + i % 3;
    const Sft s(oracle::random_irreducible(rng, m));
    const CylinderBasis basis(s, 4);
    const Potential f = oracle::random_potential(rng, m, 1 + i % 4);
    const Potential g = reconstruct(basis, expand(basis, f));
    worst = std::max(worst, (basis.leaf_values(g) - basis.leaf_values(f)).cwiseAbs().maxCoeff());
  }
  const CylinderBasis basis(Sft::FullShift(2), 3);
  const int n = basis.size();
  bool verdicts = true;
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> h(n);
    double hand = 0.0;
    for (int i = 0; i < n; ++i) {
      h[i] = u(rng) / n;
      hand += (i == 0 ? 1.0 : 2.0) * h[i];  // constant functional has norm 1, Haar ones 2
    }
    const PerturbationCheck pc = perturbation_condition(basis, h);
    verdicts = verdicts && std::abs(pc.sum - hand) <= 1e-15 && pc.holds == (hand < 1.0);
  }
  std::vector<double> big(n, 0.0);
  big[0] = 2.0;
  verdicts = verdicts && !perturbation_condition(basis, big).holds;

  const std::vector<Potential> w{Potential::Constant(2, 1.0), Potential::SymbolIndicator(2, {1})};
  const std::vector<Potential> wt{Potential::WordIndicator(2, {0, 1}), Potential::WordIndicator(2, {0, 1, 1}),
                                  Potential::WordIndicator(2, {1, 1, 0})};
  const SpanVerdict ind = span_inclusion_check(basis, w, wt, w, {wt[0], wt[1]}, 200, 1);
  const SpanVerdict dep = span_inclusion_check(basis, w, wt, w, {wt[0], wt[0]}, 200, 2);
  const bool span_ok = ind.implications_hold && ind.inclusion_holds && dep.implications_hold &&
                       !dep.inclusion_holds && ind.trials == 200 && dep.trials == 200;
  return {worst <= 1e-12 && verdicts && span_ok,
          fmt("max reconstruction residual %.2e (<= 1e-12), perturbation verdicts ", worst) +
              (verdicts ? "match" : "differ") + ", span implications " + (span_ok ? "hold" : "fail")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"variational principle on 20 random systems", 5, variational_principle},
      {"direct and spectral pressure agree at rate 1/n", 30, pressure_routes},
      {"finite-n log-MGF converges at rate 1/n", 5, finite_mgf_identity},
      {"grad L matches central differences", 30, gradient_check},
      {"dual and primal rate functions agree", 60, duality},
      {"analytic binary conjugate", 10, analytic_conjugate},
      {"irreducible versus two-component dichotomy", 30, dichotomy},
      {"level-2 rate vanishes exactly at equilibrium", 10, level2_zero_set},
      {"ball probabilities follow the rate function", 60, gartner},
      {"finite cylinder basis stage", 10, schauder},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds < criteria[i].budget;
    failures += !pass;
    std::printf("%s [%2zu] %s: %s; %.2f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), seconds, criteria[i].budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
