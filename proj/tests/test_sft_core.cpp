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
#include "thermo/graph.hpp"
#include "thermo/markov.hpp"
#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {
namespace {

Sft two_plus_three() { return Sft::DisjointUnion(Sft::FullShift(2), Sft::FullShift(3)); }

TEST(Words, CountsMatchBruteForceFilter) {
  EXPECT_EQ(count_words(Sft::FullShift(2), 3), 8);
  EXPECT_EQ(count_words(Sft::GoldenMean(), 4), 8);
  EXPECT_EQ(count_words(Sft::FullShift(1), 5), 1);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXi a = oracle::random_irreducible(rng, 3);
    for (int n = 1; n <= 6; ++n) {
      long long expected = 0;
      for (long long c = 0; c < oracle::ipow(3, n); ++c) {
        expected += oracle::admissible(a, oracle::digits(c, 3, n));
      }
      EXPECT_EQ(count_words(Sft(a), n), expected);
      EXPECT_EQ(static_cast<long long>(enumerate_words(Sft(a), n).size()), expected);
    }
  }
}

TEST(Words, EnumerationIsLexicographicAndAdmissible) {
  const Sft gm = Sft::GoldenMean();
  const auto words = enumerate_words(gm, 5);
  for (std::size_t i = 0; i < words.size(); ++i) {
    EXPECT_TRUE(gm.admissible(words[i]));
    if (i > 0) {
      EXPECT_LT(encode_word(words[i - 1], 2), encode_word(words[i], 2));
    }
  }
}

TEST(Words, EnumerationCapIsEnforced) {
  EXPECT_THROW(enumerate_words(Sft::FullShift(2), 20, 1000), ResourceError);
}

TEST(Words, EncodeDecodeRoundTrip) {
  const Word w{2, 0, 1, 1};
  EXPECT_EQ(decode_word(encode_word(w, 3), 3, 4), w);
}

TEST(SftStructure, ComponentsOfUnion) {
  const Sft u = two_plus_three();
  EXPECT_EQ(u.alphabet_size(), 5);
  EXPECT_EQ(u.nontrivial_component_count(), 2);
  EXPECT_FALSE(u.irreducible());
  EXPECT_TRUE(Sft::GoldenMean().irreducible());
  EXPECT_EQ(u.component_index()[0], u.component_index()[1]);
  EXPECT_NE(u.component_index()[1], u.component_index()[2]);
}

TEST(SftStructure, TransientSymbolIsTrivialComponent) {
  Eigen::MatrixXi a(3, 3);
  a << 1, 1, 0, 0, 0, 1, 0, 0, 1;  // symbol 1 lies on no cycle
  const Sft s(a);
  EXPECT_EQ(s.nontrivial_component_count(), 2);
  EXPECT_FALSE(s.is_nontrivial_component(s.component_index()[1]));
  EXPECT_FALSE(s.irreducible());
}

TEST(SftStructure, RejectsDeadEndSymbols) {
  Eigen::MatrixXi a(2, 2);
  a << 0, 1, 0, 1;
  EXPECT_THROW(Sft{a}, InputError);
}

TEST(SftStructure, RejectsMalformedTransitions) {
  Eigen::MatrixXi a(2, 3);
  a.setOnes();
  EXPECT_THROW(Sft{a}, InputError);
  Eigen::MatrixXi b(2, 2);
  b << 1, 2, 0, 1;
  EXPECT_THROW(Sft{b}, InputError);
}

TEST(SftStructure, LabelsParseAndFormat) {
  const Sft s(Eigen::MatrixXi::Ones(3, 3), "xyz");
  EXPECT_EQ(s.parse_word("zyx"), (Word{2, 1, 0}));
  EXPECT_EQ(s.format_word(Word{0, 2}), "xz");
  EXPECT_THROW(s.parse_word("xq"), InputError);
}

TEST(Graph, StronglyConnectedComponentsOfChain) {
  const auto scc = strongly_connected_components({{1}, {0, 2}, {}});
  EXPECT_EQ(scc.count, 2);
  EXPECT_EQ(scc.label[0], scc.label[1]);
  EXPECT_NE(scc.label[1], scc.label[2]);
}

TEST(Birkhoff, ClosedFormCases) {
  const Potential c = Potential::Constant(2, 0.7);
  EXPECT_NEAR(birkhoff_sum(c, Word{0, 1, 1, 0, 1}), 5 * 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(birkhoff_sum(Potential::SymbolIndicator(2, {1}), Word{0, 1, 1, 0}), 2.0);
  // f(01) = 1: windows 01, 10, 01, 10 with wraparound.
  EXPECT_DOUBLE_EQ(birkhoff_sum(Potential::WordIndicator(2, {0, 1}), Word{0, 1, 0, 1}), 2.0);
}

TEST(Birkhoff, RejectsShortWords) {
  EXPECT_THROW(birkhoff_sum(Potential::WordIndicator(2, {0, 1, 1}), Word{0, 1}), InputError);
}

TEST(PotentialAlgebra, LiftPreservesPeriodicSums) {
  std::mt19937_64 rng(9);
  const Potential f = oracle::random_potential(rng, 3, 2);
  const Potential g = lift(f, 4);
  EXPECT_EQ(g.depth(), 4);
  for (const Word& w : enumerate_words(Sft::FullShift(3), 6)) {
    EXPECT_NEAR(birkhoff_sum(f, w), birkhoff_sum(g, w), 1e-12);
  }
}

TEST(PotentialAlgebra, LinearCombinationMixesDepths) {
  const Potential f = Potential::Constant(2, 1.0);
  const std::vector<Potential> g{Potential::SymbolIndicator(2, {1}), Potential::WordIndicator(2, {0, 1})};
  const Potential h = linear_combination(f, g, Eigen::Vector2d(2.0, -3.0));
  EXPECT_EQ(h.depth(), 2);
  EXPECT_DOUBLE_EQ(h(Word{0, 1}), 1.0 - 3.0);
  EXPECT_DOUBLE_EQ(h(Word{1, 0}), 1.0 + 2.0);
}

TEST(PotentialAlgebra, SupNormOnAdmissibleWordsOnly) {
  Eigen::VectorXd v(4);
  v << 0.5, -1.0, 0.25, 100.0;  // "11" is forbidden on the golden mean
  EXPECT_DOUBLE_EQ(sup_norm(Sft::GoldenMean(), Potential(2, 2, v)), 1.0);
}

TEST(PotentialAlgebra, RejectsWrongTableSize) {
  EXPECT_THROW(Potential(2, 2, Eigen::VectorXd::Zero(3)), InputError);
}

TEST(Entropy, ClosedForms) {
  EXPECT_NEAR(entropy(bernoulli(Eigen::Vector2d(0.5, 0.5))), oracle::kLog2, 1e-15);
  EXPECT_NEAR(entropy(bernoulli(Eigen::Vector2d(1.0, 0.0))), 0.0, 1e-15);
  EXPECT_NEAR(entropy(bernoulli(Eigen::Vector2d(0.3, 0.7))), 0.61086430205489346303, 1e-14);
}

TEST(Entropy, MatchesBlockEntropyIncrement) {
  // H(n + 1) - H(n) over cylinder laws equals h exactly for a one-step chain.
  Eigen::Matrix2d p;
  p << 0.2, 0.8, 0.6, 0.4;
  const MarkovMeasure mu = markov_from_transition(Sft::FullShift(2), 1, p);
  const auto block_entropy = [&](int n) {
    double h = 0.0;
    for (const Word& w : enumerate_words(Sft::FullShift(2), n)) {
      const double q = cylinder_probability(mu, w);
      if (q > 0) h -= q * std::log(q);
    }
    return h;
  };
  EXPECT_NEAR(block_entropy(12) - block_entropy(11), entropy(mu), 1e-12);
}

TEST(Expectation, ClosedForms) {
  const MarkovMeasure half = bernoulli(Eigen::Vector2d(0.5, 0.5));
  const MarkovMeasure p3 = bernoulli(Eigen::Vector2d(0.7, 0.3));
  EXPECT_NEAR(expectation(p3, Potential::Constant(2, -1.5)), -1.5, 1e-15);
  EXPECT_NEAR(expectation(p3, Potential::SymbolIndicator(2, {1})), 0.3, 1e-15);
  EXPECT_NEAR(expectation(half, Potential::WordIndicator(2, {0, 1})), 0.25, 1e-15);
}

TEST(Expectation, DeepPotentialLiftsMeasure) {
  const MarkovMeasure p3 = bernoulli(Eigen::Vector2d(0.7, 0.3));
  EXPECT_NEAR(expectation(p3, Potential::WordIndicator(2, {1, 0, 1})), 0.3 * 0.7 * 0.3, 1e-15);
}

TEST(MarkovMeasure, ValidatesStochasticStructure) {
  Eigen::Matrix2d p;
  p << 0.5, 0.6, 0.5, 0.5;
  EXPECT_THROW(MarkovMeasure(2, 1, {{0}, {1}}, p, Eigen::Vector2d(0.5, 0.5)), InputError);
  p << 0.5, 0.5, 0.5, 0.5;
  EXPECT_THROW(MarkovMeasure(2, 1, {{0}, {1}}, p, Eigen::Vector2d(0.9, 0.1)), InputError);
}

TEST(MarkovMeasure, SupportMustBeAdmissible) {
  EXPECT_THROW(check_support(Sft::GoldenMean(), bernoulli(Eigen::Vector2d(0.5, 0.5))), InputError);
  Eigen::Matrix2d p;
  p << 0.5, 0.5, 1.0, 0.0;
  EXPECT_NO_THROW(check_support(Sft::GoldenMean(), markov_from_transition(Sft::GoldenMean(), 1, p)));
}

TEST(MarkovMeasure, CylinderProbabilitiesAreConsistent) {
  Eigen::Matrix2d p;
  p << 0.5, 0.5, 1.0, 0.0;
  const MarkovMeasure mu = markov_from_transition(Sft::GoldenMean(), 1, p);
  for (const Word& w : enumerate_words(Sft::GoldenMean(), 4)) {
    double children = 0.0;
    for (Symbol s = 0; s < 2; ++s) {
      Word c = w;
      c.push_back(s);
      children += cylinder_probability(mu, c);
    }
    EXPECT_NEAR(children, cylinder_probability(mu, w), 1e-15);
  }
  EXPECT_EQ(cylinder_probability(mu, Word{1, 1}), 0.0);
}

TEST(Ergodicity, SingleClassVersusMixture) {
  const Sft u = two_plus_three();
  const MarkovMeasure a = embed(bernoulli(Eigen::Vector2d(0.5, 0.5)), 5, 0);
  const MarkovMeasure b = embed(bernoulli(Eigen::Vector3d(1, 1, 1) / 3.0), 5, 2);
  EXPECT_TRUE(is_ergodic(a));
  EXPECT_FALSE(is_ergodic(mix_disjoint(a, b, 0.5)));
  const auto masses = component_masses(u, mix_disjoint(a, b, 0.25));
  ASSERT_EQ(masses.size(), 2u);
  EXPECT_NEAR(masses[0].second, 0.25, 1e-15);
  EXPECT_NEAR(masses[1].second, 0.75, 1e-15);
}

TEST(ErgodicApproximation, BiasedCoinConverges) {
  const Sft s = Sft::FullShift(2);
  const MarkovMeasure mu = bernoulli(Eigen::Vector2d(0.9, 0.1));
  double last = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto r = ergodic_approximation(s, mu, eps);
    ASSERT_TRUE(std::holds_alternative<MarkovMeasure>(r));
    const MarkovMeasure& nu = std::get<MarkovMeasure>(r);
    EXPECT_TRUE(is_ergodic(nu));
    const double d = cylinder_distance(s, mu, nu, 4);
    EXPECT_LE(d, last);
    last = d;
    if (eps == 1e-3) {
      EXPECT_LE(d, 1e-2);
      EXPECT_LE(std::abs(entropy(nu) - entropy(mu)), 1e-2);
    }
  }
}

TEST(ErgodicApproximation, ErgodicInputDistanceVanishes) {
  const Sft s = Sft::GoldenMean();
  Eigen::Matrix2d p;
  p << 0.3, 0.7, 1.0, 0.0;
  const MarkovMeasure mu = markov_from_transition(s, 1, p);
  const auto r = ergodic_approximation(s, mu, 1e-9);
  ASSERT_TRUE(std::holds_alternative<MarkovMeasure>(r));
  EXPECT_LE(cylinder_distance(s, mu, std::get<MarkovMeasure>(r), 5), 1e-8);
}

TEST(ErgodicApproximation, BalancedMixtureGetsCertificate) {
  const Sft u = two_plus_three();
  const MarkovMeasure a = embed(bernoulli(Eigen::Vector2d(0.5, 0.5)), 5, 0);
  const MarkovMeasure b = embed(bernoulli(Eigen::Vector3d(1, 1, 1) / 3.0), 5, 2);
  const auto r = ergodic_approximation(u, mix_disjoint(a, b, 0.5), 1e-3);
  ASSERT_TRUE(std::holds_alternative<FailureCertificate>(r));
  EXPECT_NEAR(std::get<FailureCertificate>(r).tv_lower_bound, 0.5, 1e-12);
}

TEST(ParryMeasure, GoldenMeanEntropyIsLogGoldenRatio) {
  const BlockPresentation block(Sft::GoldenMean(), 1);
  const MarkovMeasure mu = parry_measure(block, 0);
  EXPECT_NEAR(entropy(mu), oracle::kLogGoldenRatio, 1e-12);
}


TEST(Invariants, WordCountsEqualMatrixPowerSums) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::MatrixXi a = oracle::random_irreducible(rng, 2 + trial % 3);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(a.rows(), a.rows());
    for (int n = 1; n <= 8; ++n) {
      EXPECT_EQ(count_words(Sft(a), n), static_cast<long long>(std::llround(power.sum())));
      power = power * a.cast<double>();
    }
  }
}

TEST(Invariants, EntropyBounds) {
  std::mt19937_64 rng(14);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 3;
    Eigen::MatrixXd p(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) p(i, j) = gamma(rng);
      p.row(i) /= p.row(i).sum();
    }
    const double h = entropy(markov_from_transition(Sft::FullShift(m), 1, p));
    EXPECT_GE(h, 0.0);
    EXPECT_LT(h, std::log(m) - 1e-6);  // only the uniform chain reaches log m
  }
  EXPECT_NEAR(entropy(bernoulli(Eigen::Vector3d::Constant(1.0 / 3.0))), std::log(3.0), 1e-15);
}

TEST(Invariants, EntropyIsAffineOnDisjointMixtures) {
  Eigen::Matrix2d p;
  p << 0.3, 0.7, 0.9, 0.1;
  const MarkovMeasure a = embed(markov_from_transition(Sft::FullShift(2), 1, p), 5, 0);
  const MarkovMeasure b = embed(bernoulli(Eigen::Vector3d(0.2, 0.5, 0.3)), 5, 2);
  for (double lambda : {0.1, 0.5, 0.77}) {
    EXPECT_NEAR(entropy(mix_disjoint(a, b, lambda)), lambda * entropy(a) + (1 - lambda) * entropy(b), 1e-10);
  }
}

TEST(Invariants, ErgodicApproximationIsMonotoneOnIrreducibleSystems) {
  std::mt19937_64 rng(15);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXi a = oracle::random_irreducible(rng, 3);
    const Sft s(a);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) p(i, j) = a(i, j) ? gamma(rng) : 0.0;
      p.row(i) /= p.row(i).sum();
    }
    const MarkovMeasure mu = markov_from_transition(s, 1, p);
    double last_d = std::numeric_limits<double>::infinity();
    double last_h = last_d;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const MarkovMeasure nu = std::get<MarkovMeasure>(ergodic_approximation(s, mu, eps));
      const double d = cylinder_distance(s, mu, nu, 4);
      const double h = std::abs(entropy(nu) - entropy(mu));
      EXPECT_LE(d, last_d + 1e-15);
      EXPECT_LE(h, last_h + 1e-15);
      last_d = d;
      last_h = h;
    }
  }
}

}  // namespace
}  // namespace thermo
