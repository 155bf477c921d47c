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


#include "thermo/schauder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "thermo/errors.hpp"

namespace thermo {
namespace {

bool starts_with(const Word& word, const Word& prefix) {
  return prefix.size() <= word.size() && std::equal(prefix.begin(), prefix.end(), word.begin());
}

int numerical_rank(const Eigen::MatrixXd& a) {
  if (a.cols() == 0 || a.rows() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > kSpanTolerance * std::max(1.0, sv[0])) ++rank;
  }
  return rank;
}

// Residual of the least-squares fit of v by the columns of a.
double fit_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& v,
                    Eigen::VectorXd* coefficients = nullptr) {
  if (a.cols() == 0) {
    if (coefficients) coefficients->resize(0);
    return v.norm();
  }
  const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(v);
  if (coefficients) *coefficients = c;
  return (a * c - v).norm();
}

}  // namespace

CylinderBasis::CylinderBasis(Sft sft, int depth, std::int64_t leaf_cap)
    : sft_(std::move(sft)), depth_(depth) {
  if (depth_ < 1) throw InputError("basis depth must be at least 1");
  const std::int64_t count = count_words(sft_, depth_);
  if (count > leaf_cap) throw ResourceError("basis leaf", count, leaf_cap);
  leaves_ = enumerate_words(sft_, depth_, leaf_cap);
  const int m = sft_.alphabet_size();

  // Continuations of every admissible prefix, keyed by (length, code).
  std::map<std::pair<int, WordCode>, std::vector<Symbol>> children;
  for (const Word& leaf : leaves_) {
    for (int l = 0; l < depth_; ++l) {
      auto& c = children[{l, encode_word(std::span(leaf).first(l), m)}];
      if (std::find(c.begin(), c.end(), leaf[l]) == c.end()) c.push_back(leaf[l]);
    }
  }
  for (auto& kv : children) std::sort(kv.second.begin(), kv.second.end());

  const auto weight_below = [&](const Word& u, const Word& v) {
    if (!starts_with(v, u)) return 0.0;
    double w = 1.0;
    for (int l = static_cast<int>(u.size()); l < depth_; ++l) {
      w /= static_cast<double>(children.at({l, encode_word(std::span(v).first(l), m)}).size());
    }
    return w;
  };

  prefix_.push_back({});
  continuation_.push_back(-1);
  for (int l = 0; l < depth_; ++l) {
    std::vector<Word> level;
    if (l == 0) {
      level.push_back({});
    } else {
      for_each_word(sft_, l, [&](std::span<const Symbol> w) { level.emplace_back(w.begin(), w.end()); });
    }
    for (const Word& w : level) {
      const auto& c = children.at({l, encode_word(w, m)});
      for (std::size_t j = 1; j < c.size(); ++j) {
        prefix_.push_back(w);
        continuation_.push_back(c[j]);
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(leaves_.size());
  const auto size = static_cast<Eigen::Index>(prefix_.size());
  synthesis_ = Eigen::MatrixXd::Zero(n, size);
  analysis_ = Eigen::MatrixXd::Zero(size, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    synthesis_(v, 0) = 1.0;
    analysis_(0, v) = weight_below({}, leaves_[v]);
  }
  for (Eigen::Index i = 1; i < size; ++i) {
    const Word& w = prefix_[i];
    const auto& c = children.at({static_cast<int>(w.size()), encode_word(w, m)});
    Word wj = w;
    wj.push_back(continuation_[i]);
    Word wj0 = w;
    wj0.push_back(c.front());
    for (Eigen::Index v = 0; v < n; ++v) {
      const Word& leaf = leaves_[v];
      synthesis_(v, i) = (starts_with(leaf, wj) ? 1.0 : 0.0) -
                         (starts_with(leaf, w) ? 1.0 / static_cast<double>(c.size()) : 0.0);
      analysis_(i, v) = weight_below(wj, leaf) - weight_below(wj0, leaf);
    }
  }
  norms_ = analysis_.cwiseAbs().rowwise().sum();
}

Eigen::VectorXd CylinderBasis::leaf_values(const Potential& f) const {
  if (f.alphabet_size() != sft_.alphabet_size()) {
    throw InputError("potential alphabet does not match the basis");
  }
  if (f.depth() > depth_) {
    throw InputError("potential depth " + std::to_string(f.depth()) +
                     " exceeds basis depth " + std::to_string(depth_));
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(leaves_.size()));
  for (std::size_t v = 0; v < leaves_.size(); ++v) {
    values[static_cast<Eigen::Index>(v)] = f(std::span(leaves_[v]).first(f.depth()));
  }
  return values;
}

Potential CylinderBasis::element(int i) const {
  return reconstruct(*this, Eigen::VectorXd::Unit(size(), i));
}

Eigen::VectorXd expand(const CylinderBasis& basis, const Potential& f) {
  return basis.analysis() * basis.leaf_values(f);
}

Potential reconstruct(const CylinderBasis& basis, const Eigen::VectorXd& coefficients) {
  if (coefficients.size() != basis.size()) {
    throw InputError("coefficient vector does not match the basis size");
  }
  const int m = basis.sft().alphabet_size();
  const Eigen::VectorXd leaf = basis.synthesis() * coefficients;
  Eigen::VectorXd table = Eigen::VectorXd::Zero(word_space_size(m, basis.depth()));
  for (std::size_t v = 0; v < basis.leaves().size(); ++v) {
    table[encode_word(basis.leaves()[v], m)] = leaf[static_cast<Eigen::Index>(v)];
  }
  return Potential(m, basis.depth(), std::move(table));
}

PerturbationCheck perturbation_condition(const CylinderBasis& basis,
                                         const std::vector<double>& h_norms) {
  if (static_cast<int>(h_norms.size()) != basis.size()) {
    throw InputError("expected " + std::to_string(basis.size()) + " perturbation norms, got " +
                     std::to_string(h_norms.size()));
  }
  PerturbationCheck out;
  for (int i = 0; i < basis.size(); ++i) {
    if (!std::isfinite(h_norms[i]) || h_norms[i] < 0.0) {
      throw InputError("perturbation norms must be finite and nonnegative");
    }
    out.sum += basis.functional_norm(i) * h_norms[i];
  }
  out.holds = out.sum < 1.0;
  return out;
}

SpanVerdict span_inclusion_check(const CylinderBasis& basis,
                               const std::vector<Potential>& w_basis,
                               const std::vector<Potential>& wt_basis,
                               const std::vector<Potential>& f_seq,
                               const std::vector<Potential>& h_seq, int trials,
                               std::uint64_t seed) {
  if (f_seq.size() != h_seq.size()) {
    throw InputError("f and h sequences must have the same length");
  }
  const auto coords = [&](const std::vector<Potential>& ps) {
    Eigen::MatrixXd a(basis.size(), static_cast<Eigen::Index>(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = expand(basis, ps[i]);
    return a;
  };
  const Eigen::MatrixXd w = coords(w_basis);
  const Eigen::MatrixXd wt = coords(wt_basis);
  const Eigen::MatrixXd f = coords(f_seq);
  const Eigen::MatrixXd h = coords(h_seq);
  Eigen::MatrixXd both(basis.size(), w.cols() + wt.cols());
  both << w, wt;
  if (numerical_rank(both) != numerical_rank(w) + numerical_rank(wt)) {
    throw InputError("W and W~ are not linearly independent subspaces");
  }
  for (Eigen::Index i = 0; i < f.cols(); ++i) {
    if (fit_residual(w, f.col(i)) > kSpanTolerance) throw InputError("f_n is not in span W");
    if (fit_residual(wt, h.col(i)) > kSpanTolerance) throw InputError("h_n is not in span W~");
  }

  SpanVerdict out;
  const auto n = f.cols();
  out.h_independent = numerical_rank(h) == n;
  out.f_independent = numerical_rank(f) == n;
  if (n == 0) {
    out.trials = trials;
    return out;
  }
  // Orthonormal basis of ker(h) for the dependence-seeking trials.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullV);
  const int rank_h = numerical_rank(h);
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(n - rank_h);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = coef(rng);
    if (trial % 2 == 1 && kernel.cols() > 0) c = kernel * (kernel.transpose() * c);
    ++out.trials;
    const Eigen::VectorXd v = (f + h) * c;
    if (v.norm() <= kSpanTolerance) continue;  // the zero vector is excluded
    Eigen::VectorXd split;
    const double residual = fit_residual(both, v, &split);
    out.max_residual = std::max(out.max_residual, residual);
    const Eigen::VectorXd tilde_part = wt * split.tail(wt.cols());
    if (tilde_part.norm() <= kSpanTolerance) {
      out.inclusion_holds = false;
      ++out.violations;
    }
  }
  const bool forward = !out.h_independent || out.inclusion_holds;
  const bool backward = !(out.f_independent && out.inclusion_holds) || out.h_independent;
  out.implications_hold = forward && backward;
  return out;
}

}  // namespace thermo
