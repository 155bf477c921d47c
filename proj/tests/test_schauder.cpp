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
#include "thermo/schauder.hpp"

namespace thermo {
namespace {

TEST(CylinderBasis, BiorthogonalAndNormed) {
  const CylinderBasis basis(Sft::GoldenMean(), 4);
  const Eigen::MatrixXd id = basis.analysis() * basis.synthesis();
  EXPECT_LE((id - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(basis.size(), static_cast<int>(basis.leaves().size()));
  EXPECT_DOUBLE_EQ(basis.functional_norm(0), 1.0);
  for (int i = 1; i < basis.size(); ++i) EXPECT_DOUBLE_EQ(basis.functional_norm(i), 2.0);
}

TEST(CylinderBasis, ElementsAreMeanZeroOnTheirParent) {
  const CylinderBasis basis(Sft::FullShift(3), 2);
  for (int i = 1; i < basis.size(); ++i) {
    const Eigen::VectorXd v = basis.leaf_values(basis.element(i));
    EXPECT_NEAR(v.sum(), 0.0, 1e-14);
  }
}

TEST(Expand, ConstantAndZero) {
  const CylinderBasis basis(Sft::FullShift(2), 3);
  const Eigen::VectorXd c = expand(basis, Potential::Constant(2, 1.0));
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_LE(c.tail(c.size() - 1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(expand(basis, Potential::Zero(2)).isZero(0.0));
}

TEST(Expand, IndicatorTwoTerms) {
  // Hand solution of a + b (1_[1] - 1/2) = 1_[1]: a = 1/2, b = 1.
  const CylinderBasis basis(Sft::FullShift(2), 1);
  ASSERT_EQ(basis.size(), 2);
  const Eigen::VectorXd c = expand(basis, Potential::SymbolIndicator(2, {1}));
  EXPECT_NEAR(c[0], 0.5, 1e-15);
  EXPECT_NEAR(c[1], 1.0, 1e-15);
}

TEST(Reconstruct, RandomPotentialsOnRandomSystems) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 3;
    const Sft s(oracle::random_irreducible(rng, m));
    const int depth = 1 + trial % 4;
    const CylinderBasis basis(s, 4);
    const Potential f = oracle::random_potential(rng, m, depth);
    const Eigen::VectorXd c = expand(basis, f);
    const Potential g = reconstruct(basis, c);
    EXPECT_LE((basis.leaf_values(g) - basis.leaf_values(f)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((basis.synthesis() * c - basis.leaf_values(f)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reconstruct, RejectsDeepPotentialAndBadSize) {
  const CylinderBasis basis(Sft::FullShift(2), 2);
  EXPECT_THROW(expand(basis, Potential::WordIndicator(2, {0, 1, 1})), InputError);
  EXPECT_THROW(reconstruct(basis, Eigen::VectorXd::Zero(3)), InputError);
}

TEST(CylinderBasis, LeafCapIsEnforced) {
  EXPECT_THROW(CylinderBasis(Sft::FullShift(4), 8, 1000), ResourceError);
}

TEST(Perturbation, ZeroGeometricAndDominating) {
  const CylinderBasis basis(Sft::FullShift(2), 3);
  const int n = basis.size();
  const PerturbationCheck zero = perturbation_condition(basis, std::vector<double>(n, 0.0));
  EXPECT_EQ(zero.sum, 0.0);
  EXPECT_TRUE(zero.holds);

  std::vector<double> geo(n);
  double hand = 0.0;
  for (int i = 0; i < n; ++i) {
    geo[i] = std::ldexp(1.0, -i - 2) / basis.functional_norm(i);
    hand += std::ldexp(1.0, -i - 2);
  }
  const PerturbationCheck g = perturbation_condition(basis, geo);
  EXPECT_NEAR(g.sum, hand, 1e-15);
  EXPECT_LT(g.sum, 0.5);
  EXPECT_TRUE(g.holds);

  std::vector<double> big(n, 0.0);
  big[0] = 2.0 / basis.functional_norm(0);
  const PerturbationCheck b = perturbation_condition(basis, big);
  EXPECT_GE(b.sum, 2.0);
  EXPECT_FALSE(b.holds);
}

TEST(Perturbation, RejectsNegativeNorms) {
  const CylinderBasis basis(Sft::FullShift(2), 1);
  EXPECT_THROW(perturbation_condition(basis, {0.1, -0.1}), InputError);
  EXPECT_THROW(perturbation_condition(basis, {0.1}), InputError);
}

struct SpanSetup {
  CylinderBasis basis{Sft::FullShift(2), 3};
  std::vector<Potential> w{Potential::Constant(2, 1.0), Potential::SymbolIndicator(2, {1})};
  std::vector<Potential> wt{Potential::WordIndicator(2, {0, 1}), Potential::WordIndicator(2, {0, 1, 1}),
                            Potential::WordIndicator(2, {1, 1, 0})};
};

TEST(SpanCheck, IndependentPerturbationKeepsInclusion) {
  SpanSetup s;
  const SpanVerdict v = span_inclusion_check(s.basis, s.w, s.wt, s.w, {s.wt[0], s.wt[1]}, 200, 3);
  EXPECT_TRUE(v.h_independent);
  EXPECT_TRUE(v.inclusion_holds);
  EXPECT_TRUE(v.implications_hold);
  EXPECT_EQ(v.violations, 0);
  EXPECT_EQ(v.trials, 200);
}

TEST(SpanCheck, RepeatedPerturbationBreaksInclusion) {
  SpanSetup s;
  const SpanVerdict v = span_inclusion_check(s.basis, s.w, s.wt, s.w, {s.wt[0], s.wt[0]}, 200, 4);
  EXPECT_TRUE(v.f_independent);
  EXPECT_FALSE(v.h_independent);
  EXPECT_FALSE(v.inclusion_holds);
  EXPECT_GT(v.violations, 0);
  EXPECT_TRUE(v.implications_hold);
}

TEST(SpanCheck, EmptySequencesAreVacuous) {
  SpanSetup s;
  const SpanVerdict v = span_inclusion_check(s.basis, s.w, s.wt, {}, {});
  EXPECT_TRUE(v.inclusion_holds);
  EXPECT_TRUE(v.implications_hold);
}

TEST(SpanCheck, PreconditionsAreChecked) {
  SpanSetup s;
  EXPECT_THROW(span_inclusion_check(s.basis, s.w, s.wt, s.w, {s.wt[0]}), InputError);
  EXPECT_THROW(span_inclusion_check(s.basis, s.w, s.w, s.w, s.w), InputError);
  EXPECT_THROW(span_inclusion_check(s.basis, s.w, s.wt, {s.wt[0]}, {s.wt[1]}), InputError);
}


TEST(Invariants, ReconstructionAtEveryDepthOnTwoShift) {
  std::mt19937_64 rng(72);
  for (int k = 1; k <= 6; ++k) {
    const CylinderBasis basis(Sft::FullShift(2), k);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Potential f = oracle::random_potential(rng, 2, k);
      worst = std::max(worst, (basis.synthesis() * expand(basis, f) - basis.leaf_values(f)).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(worst, 1e-12) << "depth " << k;
  }
}

TEST(Invariants, FunctionalNormsByExtremePointEnumeration) {
  // The norm of a functional on depth-K functions with the sup norm is its
  // largest value over the sign vectors, the extreme points of the unit ball.
  const CylinderBasis basis(Sft::GoldenMean(), 4);
  const auto leaves = static_cast<int>(basis.leaves().size());
  ASSERT_LE(leaves, 16);
  for (int i = 0; i < basis.size(); ++i) {
    double best = 0.0;
    for (long mask = 0; mask < (1L << leaves); ++mask) {
      double v = 0.0;
      for (int j = 0; j < leaves; ++j) v += basis.analysis()(i, j) * ((mask >> j) & 1 ? 1.0 : -1.0);
      best = std::max(best, std::abs(v));
    }
    EXPECT_NEAR(best, basis.functional_norm(i), 1e-13);
    EXPECT_LE(best, 2.0 + 1e-13);
  }
}

}  // namespace
}  // namespace thermo
