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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermo/errors.hpp"
#include "thermo/ldp.hpp"
#include "thermo/pressure.hpp"
#include "thermo/rate.hpp"

namespace thermo {
namespace {

using Vec = Eigen::VectorXd;

Vec v1(double a) { return Vec::Constant(1, a); }

Potential ones() { return Potential::SymbolIndicator(2, {1}); }

// log of sum_{|j/n - x| <= delta} C(n, j), divided by n, minus log 2.
double binomial_ball(int n, double x, double delta) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (int j = 0; j <= n; ++j) {
    if (std::abs(static_cast<double>(j) / n - x) <= delta + 1e-12) {
      logs.push_back(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0));
      best = std::max(best, logs.back());
    }
  }
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  double z = 0.0;
  for (double l : logs) z += std::exp(l - best);
  return (best + std::log(z)) / n - oracle::kLog2;
}

TEST(FiniteMgf, ZeroPerturbation) {
  for (int n : {1, 6, 13}) EXPECT_EQ(finite_n_mgf(Sft::GoldenMean(), Potential::Zero(2), Potential::Zero(2), n), 0.0);
}

TEST(FiniteMgf, FullShiftIsExact) {
  for (double t : {-2.0, 0.5, 1.7}) {
    for (int n : {1, 8, 25}) {
      EXPECT_NEAR(finite_n_mgf(Sft::FullShift(2), Potential::Zero(2), t * ones(), n),
                  oracle::softplus(t) - oracle::kLog2, 1e-12);
    }
  }
}

TEST(FiniteMgf, GoldenMeanGapIsOrderOneOverN) {
  const Sft gm = Sft::GoldenMean();
  const double limit = oracle::pressure(gm.transitions(), ones()) - oracle::kLogGoldenRatio;
  double last = std::numeric_limits<double>::infinity();
  for (int n = 8; n <= 20; ++n) {
    const double gap = std::abs(finite_n_mgf(gm, Potential::Zero(2), ones(), n) - limit);
    EXPECT_LT(gap, last);
    EXPECT_LE(n * gap, 0.2);
    last = gap;
  }
}

TEST(FiniteMgf, MatchesOpenWordOracleDifference) {
  // With a depth-1 potential the periodic and open sums agree, so the
  // oracle difference of partition functions is exact.
  std::mt19937_64 rng(61);
  const Eigen::MatrixXi a = oracle::random_irreducible(rng, 3);
  const Potential f = oracle::random_potential(rng, 3, 1);
  const Potential g = oracle::random_potential(rng, 3, 1);
  for (int n : {4, 7}) {
    const double expected = oracle::open_word_pressure(a, f + g, n) - oracle::open_word_pressure(a, f, n);
    EXPECT_NEAR(finite_n_mgf(Sft(a), f, g, n), expected, 1e-12);
  }
}

TEST(EmpiricalLaw, WeightsAreNormalised) {
  const EmpiricalLaw law(Sft::GoldenMean(), ones(), 8);
  EXPECT_NEAR(law.weights().sum(), 1.0, 1e-14);
  EXPECT_EQ(static_cast<long long>(law.words().size()), count_words(Sft::GoldenMean(), 8));
  const EmpiricalLaw tilted = law.tilted(-1.0 * ones());
  EXPECT_NEAR(tilted.weights().sum(), 1.0, 1e-14);
  // Tilting by -f undoes the base weights.
  EXPECT_LE((tilted.weights().array() - 1.0 / tilted.weights().size()).abs().maxCoeff(), 1e-14);
}

TEST(EmpiricalLaw, CapIsEnforced) {
  EXPECT_THROW(EmpiricalLaw(Sft::FullShift(3), Potential::Zero(3), 20, 1000), ResourceError);
}

TEST(BallProbability, BinomialTails) {
  const PushforwardLaw pl(EmpiricalLaw(Sft::FullShift(2), Potential::Zero(2), 16), {ones()});
  for (double x : {0.3, 0.5, 0.75}) {
    const ExtendedReal v = ball_log_probability(pl, v1(x), 0.1);
    EXPECT_NEAR(v.value(), binomial_ball(16, x, 0.1), 1e-12);
  }
}

TEST(BallProbability, EmptyBallIsMinusInfinity) {
  const PushforwardLaw pl(EmpiricalLaw(Sft::FullShift(2), Potential::Zero(2), 10), {ones()});
  EXPECT_TRUE(ball_log_probability(pl, v1(1.5), 0.05).is_minus_infinity());
  EXPECT_TRUE(ball_log_probability(pl, v1(0.33), 0.02).is_minus_infinity());
}

TEST(BallProbability, ConcentratesAtMean) {
  double last = -std::numeric_limits<double>::infinity();
  for (int n : {8, 14, 20}) {
    const double v = ball_log_probability(Sft::FullShift(2), Potential::Zero(2), {ones()}, n, v1(0.5), 0.1).value();
    EXPECT_GE(v, last);
    last = v;
  }
  EXPECT_GT(last, -0.02);
}

TEST(BallProbability, DynamicProgramMatchesEnumeration) {
  std::mt19937_64 rng(62);
  const Sft s(oracle::random_irreducible(rng, 3));
  const Potential f = oracle::random_potential(rng, 3, 2);
  const std::vector<Potential> dirs{oracle::random_potential(rng, 3, 1, 0, 1),
                                    Potential::WordIndicator(3, {0, 1})};
  for (int n : {6, 9}) {
    for (const Vec& x : {Vec(Eigen::Vector2d(0.5, 0.2)), Vec(Eigen::Vector2d(0.3, 0.1))}) {
      const ExtendedReal e = ball_log_probability(s, f, dirs, n, x, 0.15, BallRoute::kEnumeration);
      const BallDpResult d = ball_log_probability_dp(s, f, dirs, n, x, 0.15);
      ASSERT_EQ(e.is_minus_infinity(), d.value.is_minus_infinity());
      if (e.is_finite()) {
        EXPECT_NEAR(e.value(), d.value.value(), 1e-12);
      }
    }
  }
}

TEST(BallProbability, BiasedCoinNearPrediction) {
  const double inf_rate = rate_dual(RateFunction(Sft::FullShift(2), Potential::Zero(2), {ones()}),
                                    v1(0.73)).value();
  const double v = ball_log_probability(Sft::FullShift(2), Potential::Zero(2), {ones()}, 20, v1(0.75), 0.02).value();
  EXPECT_NEAR(v, binomial_ball(20, 0.75, 0.02), 1e-12);
  EXPECT_GE(v, -inf_rate - 0.15);
  EXPECT_LE(v, -inf_rate + 0.15);
}

TEST(Gartner, CoinSuitePasses) {
  const GartnerReport r =
      gartner_audit(Sft::FullShift(2), Potential::Zero(2), Potential::Zero(2), {ones()},
                    {12, 14, 16, 18, 20}, {v1(0.6), v1(0.75), v1(0.9)}, 0.02);
  EXPECT_TRUE(r.hypothesis);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_discrepancy, r.tolerance);
  EXPECT_EQ(r.rows.size(), 15u);
}

TEST(Gartner, KinkBaseFailsHypothesis) {
  const Sft u = Sft::DisjointUnion(Sft::FullShift(2), Sft::FullShift(3));
  const Potential pair = Potential::SymbolIndicator(5, {0, 1});
  const GartnerReport r = gartner_audit(u, oracle::kLogThreeHalves * pair, Potential::Zero(5), {pair},
                                        {6, 8}, {v1(0.5)}, 0.1);
  EXPECT_FALSE(r.hypothesis);
  EXPECT_FALSE(r.pass);
}

TEST(Gartner, SinglePointAtMean) {
  const GartnerReport r = gartner_audit(Sft::FullShift(2), Potential::Zero(2), Potential::Zero(2), {ones()},
                                        {10, 15, 20}, {v1(0.5)}, 0.05);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.points[0].predicted, 0.0, 1e-12);
}


TEST(Invariants, TiltingIdentity) {
  std::mt19937_64 rng(63);
  const Sft s(oracle::random_irreducible(rng, 3));
  const Potential f = oracle::random_potential(rng, 3, 2);
  const Potential g = oracle::random_potential(rng, 3, 1);
  const EmpiricalLaw tilted = EmpiricalLaw(s, f, 7).tilted(g);
  const EmpiricalLaw direct(s, f + g, 7);
  EXPECT_LE((tilted.weights() - direct.weights()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(tilted.weights().sum(), 1.0, 1e-12);
}

}  // namespace
}  // namespace thermo
