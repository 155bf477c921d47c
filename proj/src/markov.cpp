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

#include "thermo/markov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "thermo/errors.hpp"
#include "thermo/graph.hpp"
#include "thermo/perron.hpp"

namespace thermo {
namespace {

bool shifts_to(const Word& u, const Word& v) {
  return std::equal(u.begin() + 1, u.end(), v.begin(), v.end() - 1);
}

}  // namespace

MarkovMeasure::MarkovMeasure(int alphabet_size, int depth, std::vector<Word> states,
                             Eigen::MatrixXd transition, Eigen::VectorXd stationary)
    : alphabet_size_(alphabet_size),
      depth_(depth),
      states_(std::move(states)),
      transition_(std::move(transition)),
      stationary_(std::move(stationary)) {
  const auto n = static_cast<Eigen::Index>(states_.size());
  if (depth_ < 1) throw InputError("Markov measure depth must be at least 1");
  if (n == 0) throw InputError("Markov measure needs at least one state");
  if (transition_.rows() != n || transition_.cols() != n || stationary_.size() != n) {
    throw InputError("Markov measure shapes do not match the state count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Word& w = states_[i];
    if (static_cast<int>(w.size()) != depth_) {
      throw InputError("Markov state has the wrong length");
    }
    for (Symbol s : w) {
      if (s < 0 || s >= alphabet_size_) throw InputError("Markov state symbol out of range");
    }
    if (!index_.emplace(encode_word(w, alphabet_size_), static_cast<int>(i)).second) {
      throw InputError("duplicate Markov state");
    }
  }
  if (!transition_.allFinite() || transition_.minCoeff() < 0.0) {
    throw InputError("transition matrix must be finite and nonnegative");
  }
  if (!stationary_.allFinite() || stationary_.minCoeff() < 0.0) {
    throw InputError("stationary vector must be finite and nonnegative");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(transition_.row(i).sum() - 1.0) > kStochasticTolerance) {
      throw InputError("transition row " + std::to_string(i) + " sums to " +
                       std::to_string(transition_.row(i).sum()));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (transition_(i, j) > 0.0 && !shifts_to(states_[i], states_[j])) {
        throw InputError("transition between non-overlapping words");
      }
    }
  }
  if (std::abs(stationary_.sum() - 1.0) > kStochasticTolerance) {
    throw InputError("stationary vector does not sum to 1");
  }
  const double drift =
      (stationary_.transpose() * transition_ - stationary_.transpose()).cwiseAbs().maxCoeff();
  if (drift > kStochasticTolerance) {
    throw InputError("stationary vector is not invariant (drift " +
                     std::to_string(drift) + ")");
  }
}

int MarkovMeasure::state_index(std::span<const Symbol> word) const {
  if (static_cast<int>(word.size()) != depth_) return -1;
  const auto it = index_.find(encode_word(word, alphabet_size_));
  return it == index_.end() ? -1 : it->second;
}

MarkovMeasure bernoulli(const Eigen::VectorXd& probabilities) {
  const auto m = static_cast<int>(probabilities.size());
  if (m < 1 || probabilities.minCoeff() < 0.0 ||
      std::abs(probabilities.sum() - 1.0) > kStochasticTolerance) {
    throw InputError("Bernoulli weights must be a probability vector");
  }
  std::vector<Word> states;
  for (Symbol s = 0; s < m; ++s) states.push_back({s});
  Eigen::MatrixXd p = probabilities.transpose().replicate(m, 1);
  return MarkovMeasure(m, 1, std::move(states), std::move(p), probabilities);
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
  const auto n = transition.rows();
  std::vector<std::vector<int>> adjacency(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (transition(i, j) > 0.0) adjacency[i].push_back(static_cast<int>(j));
    }
  }
  const auto scc = strongly_connected_components(adjacency);
  std::vector<bool> closed(scc.count, true);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j : adjacency[i]) {
      if (scc.label[i] != scc.label[j]) closed[scc.label[i]] = false;
    }
  }
  if (std::count(closed.begin(), closed.end(), true) != 1) {
    throw InputError("stationary vector is not unique: chain has " +
                     std::to_string(std::count(closed.begin(), closed.end(), true)) +
                     " closed classes");
  }
  // pi (P - I) = 0 with one equation replaced by sum(pi) = 1.
  Eigen::MatrixXd system = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd pi = lu.solve(rhs);
  // One step of iterative refinement.
  pi += lu.solve(rhs - system * pi);
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

MarkovMeasure markov_from_transition(const Sft& sft, int depth,
                                     const Eigen::MatrixXd& transition) {
  const BlockPresentation block(sft, depth);
  std::vector<Word> states;
  for (int i = 0; i < block.state_count(); ++i) states.push_back(block.state(i));
  if (transition.rows() != block.state_count()) {
    throw InputError("transition matrix has " + std::to_string(transition.rows()) +
                     " rows, expected " + std::to_string(block.state_count()) +
                     " admissible words");
  }
  MarkovMeasure mu(sft.alphabet_size(), depth, std::move(states), transition,
                   stationary_distribution(transition));
  check_support(sft, mu);
  return mu;
}

void check_support(const Sft& sft, const MarkovMeasure& mu) {
  if (mu.alphabet_size() != sft.alphabet_size()) {
    throw InputError("measure alphabet does not match the shift");
  }
  const auto& p = mu.transition();
  for (int u = 0; u < mu.state_count(); ++u) {
    const Word& a = mu.states()[u];
    if (mu.stationary()[u] > 0.0 && !sft.admissible(a)) {
      throw InputError("measure charges the inadmissible word " + sft.format_word(a));
    }
    for (int v = 0; v < mu.state_count(); ++v) {
      if (p(u, v) > 0.0 && !sft.allowed(a.back(), mu.states()[v].back())) {
        throw InputError("measure uses a forbidden transition out of " +
                         sft.format_word(a));
      }
    }
  }
}

double entropy(const MarkovMeasure& mu) {
  const auto& p = mu.transition();
  const auto& pi = mu.stationary();
  double h = 0.0;
  for (Eigen::Index u = 0; u < p.rows(); ++u) {
    if (pi[u] <= 0.0) continue;
    double row = 0.0;
    for (Eigen::Index v = 0; v < p.cols(); ++v) {
      if (p(u, v) > 0.0) row -= p(u, v) * std::log(p(u, v));
    }
    h += pi[u] * row;
  }
  return h;
}

double expectation(const MarkovMeasure& mu, const Potential& f) {
  if (f.alphabet_size() != mu.alphabet_size()) {
    throw InputError("potential and measure live on different alphabets");
  }
  if (f.depth() > mu.depth() + 1) return expectation(lift(mu, f.depth() - 1), f);
  const int m = mu.alphabet_size();
  const int d = mu.depth();
  const std::int64_t divisor = word_space_size(m, d + 1 - f.depth());
  const auto& p = mu.transition();
  const auto& pi = mu.stationary();
  double total = 0.0;
  for (int u = 0; u < mu.state_count(); ++u) {
    if (pi[u] <= 0.0) continue;
    const WordCode head = encode_word(mu.states()[u], m);
    for (int v = 0; v < mu.state_count(); ++v) {
      if (p(u, v) <= 0.0) continue;
      const WordCode edge = head * m + mu.states()[v].back();
      total += pi[u] * p(u, v) * f.at(edge / divisor);
    }
  }
  return total;
}

double cylinder_probability(const MarkovMeasure& mu, std::span<const Symbol> word) {
  const int d = mu.depth();
  const int len = static_cast<int>(word.size());
  if (len == 0) throw InputError("cylinder word must be non-empty");
  if (len <= d) {
    double total = 0.0;
    for (int u = 0; u < mu.state_count(); ++u) {
      const Word& s = mu.states()[u];
      if (std::equal(word.begin(), word.end(), s.begin())) total += mu.stationary()[u];
    }
    return total;
  }
  int u = mu.state_index(word.first(d));
  if (u < 0) return 0.0;
  double prob = mu.stationary()[u];
  for (int i = 1; i + d <= len && prob > 0.0; ++i) {
    const int v = mu.state_index(word.subspan(i, d));
    if (v < 0) return 0.0;
    prob *= mu.transition()(u, v);
    u = v;
  }
  return prob;
}

MarkovMeasure lift(const MarkovMeasure& mu, int depth) {
  const int d = mu.depth();
  if (depth < d) throw InputError("cannot lift a Markov measure to a smaller depth");
  if (depth == d) return mu;
  const int m = mu.alphabet_size();
  // Positive-mass words of the new length, with their probabilities.
  std::map<WordCode, std::pair<Word, double>> words;
  for (int u = 0; u < mu.state_count(); ++u) {
    if (mu.stationary()[u] <= 0.0) continue;
    std::vector<std::pair<Word, std::pair<int, double>>> stack;
    stack.push_back({mu.states()[u], {u, mu.stationary()[u]}});
    while (!stack.empty()) {
      auto [w, tail] = std::move(stack.back());
      stack.pop_back();
      if (static_cast<int>(w.size()) == depth) {
        words.emplace(encode_word(w, m), std::make_pair(w, tail.second));
        continue;
      }
      for (int v = 0; v < mu.state_count(); ++v) {
        const double pv = mu.transition()(tail.first, v);
        if (pv <= 0.0) continue;
        Word next = w;
        next.push_back(mu.states()[v].back());
        stack.push_back({std::move(next), {v, tail.second * pv}});
      }
    }
  }
  std::vector<Word> states;
  std::vector<int> tail_state;
  Eigen::VectorXd pi(static_cast<Eigen::Index>(words.size()));
  std::unordered_map<WordCode, int> index;
  for (const auto& [code, entry] : words) {
    index.emplace(code, static_cast<int>(states.size()));
    pi[static_cast<Eigen::Index>(states.size())] = entry.second;
    tail_state.push_back(mu.state_index(std::span<const Symbol>(entry.first).last(d)));
    states.push_back(entry.first);
  }
  const auto n = static_cast<Eigen::Index>(states.size());
  const std::int64_t tail = word_space_size(m, depth - 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WordCode shifted = (encode_word(states[i], m) % tail) * m;
    for (Symbol a = 0; a < m; ++a) {
      const auto it = index.find(shifted + a);
      if (it == index.end()) continue;
      p(i, it->second) = mu.transition()(tail_state[i], tail_state[it->second]);
    }
    p.row(i) /= p.row(i).sum();
  }
  pi /= pi.sum();
  return MarkovMeasure(m, depth, std::move(states), std::move(p), std::move(pi));
}

double cylinder_distance(const Sft& sft, const MarkovMeasure& mu,
                         const MarkovMeasure& nu, int length) {
  double best = 0.0;
  for_each_word(sft, length, [&](std::span<const Symbol> w) {
    best = std::max(best, std::abs(cylinder_probability(mu, w) -
                                   cylinder_probability(nu, w)));
  });
  return best;
}

MarkovMeasure embed(const MarkovMeasure& mu, int alphabet_size, int offset) {
  if (offset < 0 || offset + mu.alphabet_size() > alphabet_size) {
    throw InputError("embedding does not fit in the target alphabet");
  }
  std::vector<Word> states = mu.states();
  for (auto& w : states) {
    for (auto& s : w) s += offset;
  }
  return MarkovMeasure(alphabet_size, mu.depth(), std::move(states), mu.transition(),
                       mu.stationary());
}

MarkovMeasure mix_disjoint(const MarkovMeasure& mu, const MarkovMeasure& nu,
                           double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("mixture weight must lie in [0,1]");
  if (mu.alphabet_size() != nu.alphabet_size()) {
    throw InputError("mixed measures must share an alphabet");
  }
  const int depth = std::max(mu.depth(), nu.depth());
  const MarkovMeasure a = lift(mu, depth);
  const MarkovMeasure b = lift(nu, depth);
  for (const auto& w : b.states()) {
    if (a.state_index(w) >= 0) throw InputError("mixed measures must have disjoint supports");
  }
  std::vector<Word> states = a.states();
  states.insert(states.end(), b.states().begin(), b.states().end());
  const Eigen::Index na = a.state_count();
  const Eigen::Index nb = b.state_count();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(na + nb, na + nb);
  p.topLeftCorner(na, na) = a.transition();
  p.bottomRightCorner(nb, nb) = b.transition();
  Eigen::VectorXd pi(na + nb);
  pi << lambda * a.stationary(), (1.0 - lambda) * b.stationary();
  return MarkovMeasure(mu.alphabet_size(), depth, std::move(states), std::move(p),
                       std::move(pi));
}

std::vector<std::pair<int, double>> component_masses(const Sft& sft,
                                                     const MarkovMeasure& mu) {
  std::map<int, double> mass;
  for (int u = 0; u < mu.state_count(); ++u) {
    mass[sft.component_index()[mu.states()[u].front()]] += mu.stationary()[u];
  }
  return {mass.begin(), mass.end()};
}

bool is_ergodic(const MarkovMeasure& mu) {
  std::vector<int> support;
  for (int u = 0; u < mu.state_count(); ++u) {
    if (mu.stationary()[u] > 0.0) support.push_back(u);
  }
  std::vector<int> local(mu.state_count(), -1);
  for (std::size_t i = 0; i < support.size(); ++i) local[support[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adjacency(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (int v = 0; v < mu.state_count(); ++v) {
      if (mu.transition()(support[i], v) > 0.0 && local[v] >= 0) {
        adjacency[i].push_back(local[v]);
      }
    }
  }
  return strongly_connected_components(adjacency).count == 1;
}

MarkovMeasure parry_measure(const BlockPresentation& block, int component_slot) {
  const BlockComponent& comp = block.components().at(component_slot);
  const auto n = static_cast<Eigen::Index>(comp.states.size());
  std::vector<int> local(block.state_count(), -1);
  for (Eigen::Index i = 0; i < n; ++i) local[comp.states[i]] = static_cast<int>(i);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int e : comp.edges) {
    a(local[block.edges()[e].from], local[block.edges()[e].to]) = 1.0;
  }
  const auto perron = perron_solve(a);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (a(u, v) > 0.0) p(u, v) = perron.right[v] / (perron.eigenvalue * perron.right[u]);
    }
    p.row(u) /= p.row(u).sum();
  }
  std::vector<Word> states;
  for (int s : comp.states) states.push_back(block.state(s));
  Eigen::VectorXd pi = stationary_distribution(p);
  return MarkovMeasure(block.sft().alphabet_size(), block.word_length(), std::move(states),
                       std::move(p), std::move(pi));
}

ErgodicApproximation ergodic_approximation(const Sft& sft, const MarkovMeasure& mu,
                                           double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("mixing weight must lie in (0,1)");
  check_support(sft, mu);
  constexpr double kChargeThreshold = 1e-12;
  const auto masses = component_masses(sft, mu);
  std::vector<std::pair<int, double>> charged;
  for (const auto& entry : masses) {
    if (entry.second > kChargeThreshold) charged.push_back(entry);
  }
  if (charged.size() >= 2) {
    double top = 0.0;
    for (const auto& entry : charged) top = std::max(top, entry.second);
    return FailureCertificate{charged, 1.0 - top};
  }

  const BlockPresentation block(sft, mu.depth());
  int slot = -1;
  for (std::size_t s = 0; s < block.components().size(); ++s) {
    if (block.components()[s].id == charged.front().first) slot = static_cast<int>(s);
  }
  if (slot < 0) throw InputError("measure charges a component without cycles");
  const MarkovMeasure parry = parry_measure(block, slot);

  const auto n = static_cast<Eigen::Index>(parry.state_count());
  Eigen::MatrixXd p = eps * parry.transition();
  for (Eigen::Index u = 0; u < n; ++u) {
    const int src = mu.state_index(parry.states()[u]);
    if (src < 0 || mu.stationary()[src] <= 0.0) {
      p.row(u) = parry.transition().row(u);
      continue;
    }
    for (Eigen::Index v = 0; v < n; ++v) {
      const int dst = mu.state_index(parry.states()[v]);
      if (dst >= 0) p(u, v) += (1.0 - eps) * mu.transition()(src, dst);
    }
    p.row(u) /= p.row(u).sum();
  }
  Eigen::VectorXd pi = stationary_distribution(p);
  return MarkovMeasure(mu.alphabet_size(), mu.depth(), parry.states(), std::move(p),
                       std::move(pi));
}

}  // namespace thermo
