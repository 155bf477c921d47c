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

#include "thermo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermo/errors.hpp"

namespace thermo {

Potential::Potential(int alphabet_size, int depth, Eigen::VectorXd values)
    : alphabet_size_(alphabet_size), depth_(depth), values_(std::move(values)) {
  if (alphabet_size_ < 1) throw InputError("potential alphabet must be non-empty");
  if (depth_ < 1) throw InputError("potential depth must be at least 1");
  if (values_.size() != word_space_size(alphabet_size_, depth_)) {
    throw InputError("potential table has " + std::to_string(values_.size()) +
                     " entries, expected m^depth = " +
                     std::to_string(word_space_size(alphabet_size_, depth_)));
  }
  if (!values_.allFinite()) throw InputError("potential values must be finite");
}

Potential Potential::Constant(int alphabet_size, double c) {
  return Potential(alphabet_size, 1, Eigen::VectorXd::Constant(alphabet_size, c));
}

Potential Potential::SymbolIndicator(int alphabet_size,
                                     const std::vector<Symbol>& symbols) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(alphabet_size);
  for (Symbol s : symbols) {
    if (s < 0 || s >= alphabet_size) throw InputError("indicator symbol out of range");
    v[s] = 1.0;
  }
  return Potential(alphabet_size, 1, std::move(v));
}

Potential Potential::WordIndicator(int alphabet_size, const Word& word) {
  if (word.empty()) throw InputError("indicator word must be non-empty");
  const int depth = static_cast<int>(word.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(word_space_size(alphabet_size, depth));
  v[encode_word(word, alphabet_size)] = 1.0;
  return Potential(alphabet_size, depth, std::move(v));
}

Potential Potential::FromFunction(
    int alphabet_size, int depth,
    const std::function<double(std::span<const Symbol>)>& value) {
  const std::int64_t size = word_space_size(alphabet_size, depth);
  Eigen::VectorXd v(size);
  for (WordCode c = 0; c < size; ++c) {
    const Word w = decode_word(c, alphabet_size, depth);
    v[c] = value(w);
  }
  return Potential(alphabet_size, depth, std::move(v));
}

double Potential::operator()(std::span<const Symbol> window) const {
  return values_[encode_word(window.first(depth_), alphabet_size_)];
}

Potential lift(const Potential& f, int depth) {
  if (depth < f.depth()) throw InputError("cannot lift a potential to a smaller depth");
  if (depth == f.depth()) return f;
  const int m = f.alphabet_size();
  const std::int64_t stride = word_space_size(m, depth - f.depth());
  const std::int64_t size = word_space_size(m, depth);
  Eigen::VectorXd v(size);
  for (WordCode c = 0; c < size; ++c) v[c] = f.at(c / stride);
  return Potential(m, depth, std::move(v));
}

namespace {

void require_same_alphabet(const Potential& f, const Potential& g) {
  if (f.alphabet_size() != g.alphabet_size()) {
    throw InputError("potentials live on different alphabets");
  }
}

}  // namespace

Potential operator+(const Potential& f, const Potential& g) {
  require_same_alphabet(f, g);
  const int depth = std::max(f.depth(), g.depth());
  return Potential(f.alphabet_size(), depth,
                   lift(f, depth).values() + lift(g, depth).values());
}

Potential operator-(const Potential& f, const Potential& g) {
  return f + (-1.0) * g;
}

Potential operator*(double c, const Potential& f) {
  return Potential(f.alphabet_size(), f.depth(), c * f.values());
}

Potential linear_combination(const Potential& f, std::span<const Potential> g,
                             const Eigen::VectorXd& t) {
  if (static_cast<std::size_t>(t.size()) != g.size()) {
    throw InputError("coefficient count does not match direction count");
  }
  int depth = f.depth();
  for (const auto& gk : g) {
    require_same_alphabet(f, gk);
    depth = std::max(depth, gk.depth());
  }
  Eigen::VectorXd v = lift(f, depth).values();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (t[k] != 0.0) v += t[k] * lift(g[k], depth).values();
  }
  return Potential(f.alphabet_size(), depth, std::move(v));
}

double sup_norm(const Sft& sft, const Potential& f) {
  double best = 0.0;
  for_each_word(sft, f.depth(), [&](std::span<const Symbol> w) {
    best = std::max(best, std::abs(f(w)));
  });
  return best;
}

void check_potential(const Sft& sft, const Potential& f) {
  if (f.alphabet_size() != sft.alphabet_size()) {
    throw InputError("potential alphabet size " + std::to_string(f.alphabet_size()) +
                     " does not match shift alphabet size " +
                     std::to_string(sft.alphabet_size()));
  }
  if (!f.values().allFinite()) throw InputError("potential values must be finite");
}

double birkhoff_sum(const Potential& f, std::span<const Symbol> word) {
  const int n = static_cast<int>(word.size());
  const int k = f.depth();
  if (n < k) {
    throw InputError("word of length " + std::to_string(n) +
                     " is shorter than potential depth " + std::to_string(k));
  }
  const int m = f.alphabet_size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    WordCode code = 0;
    for (int j = 0; j < k; ++j) code = code * m + word[(i + j) % n];
    total += f.at(code);
  }
  return total;
}

}  // namespace thermo
