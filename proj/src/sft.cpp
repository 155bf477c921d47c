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

#include "thermo/sft.hpp"

#include <algorithm>
#include <limits>

#include "thermo/errors.hpp"
#include "thermo/graph.hpp"

namespace thermo {
namespace {

constexpr std::string_view kDefaultSymbols =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  return a > kMax - b ? kMax : a + b;
}

}  // namespace

std::int64_t word_space_size(int alphabet_size, int length) {
  std::int64_t size = 1;
  for (int i = 0; i < length; ++i) {
    if (size > (std::int64_t{1} << 62) / alphabet_size) {
      throw ResourceError("word space size", std::numeric_limits<std::int64_t>::max(),
                          std::int64_t{1} << 62);
    }
    size *= alphabet_size;
  }
  return size;
}

WordCode encode_word(std::span<const Symbol> word, int alphabet_size) {
  WordCode code = 0;
  for (Symbol s : word) code = code * alphabet_size + s;
  return code;
}

Word decode_word(WordCode code, int alphabet_size, int length) {
  Word word(length);
  for (int i = length - 1; i >= 0; --i) {
    word[i] = static_cast<Symbol>(code % alphabet_size);
    code /= alphabet_size;
  }
  return word;
}

Sft::Sft(Eigen::MatrixXi transitions, std::string symbols)
    : transitions_(std::move(transitions)), symbols_(std::move(symbols)) {
  const int m = static_cast<int>(transitions_.rows());
  if (m < 1 || transitions_.cols() != m) {
    throw InputError("transition matrix must be square and non-empty");
  }
  if (symbols_.empty()) {
    if (m > static_cast<int>(kDefaultSymbols.size())) {
      throw InputError("alphabet too large for default symbol labels");
    }
    symbols_ = std::string(kDefaultSymbols.substr(0, m));
  }
  if (static_cast<int>(symbols_.size()) != m) {
    throw InputError("symbol labels must match the alphabet size");
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (symbols_[i] == symbols_[j]) throw InputError("duplicate symbol label");
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int e = transitions_(i, j);
      if (e != 0 && e != 1) throw InputError("transition entries must be 0 or 1");
    }
    if (transitions_.row(i).sum() == 0) {
      throw InputError("symbol " + std::string(1, symbols_[i]) +
                       " has no successor");
    }
    if (transitions_.col(i).sum() == 0) {
      throw InputError("symbol " + std::string(1, symbols_[i]) +
                       " has no predecessor");
    }
  }

  std::vector<std::vector<int>> adjacency(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (transitions_(i, j)) adjacency[i].push_back(j);
    }
  }
  const StronglyConnectedComponents scc = strongly_connected_components(adjacency);
  component_ = scc.label;
  nontrivial_.assign(scc.count, false);
  for (int i = 0; i < m; ++i) {
    for (int j : adjacency[i]) {
      if (component_[i] == component_[j]) nontrivial_[component_[i]] = true;
    }
  }
}

Sft Sft::FullShift(int alphabet_size) {
  return Sft(Eigen::MatrixXi::Ones(alphabet_size, alphabet_size));
}

Sft Sft::GoldenMean() {
  Eigen::MatrixXi a(2, 2);
  a << 1, 1, 1, 0;
  return Sft(a);
}

Sft Sft::DisjointUnion(const Sft& a, const Sft& b) {
  const int ma = a.alphabet_size();
  const int mb = b.alphabet_size();
  Eigen::MatrixXi t = Eigen::MatrixXi::Zero(ma + mb, ma + mb);
  t.topLeftCorner(ma, ma) = a.transitions();
  t.bottomRightCorner(mb, mb) = b.transitions();
  std::string labels;
  if (ma + mb <= static_cast<int>(kDefaultSymbols.size())) {
    labels = std::string(kDefaultSymbols.substr(0, ma + mb));
  }
  return Sft(t, labels);
}

bool Sft::admissible(std::span<const Symbol> word) const {
  const int m = alphabet_size();
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= m) return false;
    if (i > 0 && !allowed(word[i - 1], word[i])) return false;
  }
  return true;
}

int Sft::nontrivial_component_count() const {
  return static_cast<int>(std::count(nontrivial_.begin(), nontrivial_.end(), true));
}

std::vector<Symbol> Sft::component_symbols(int c) const {
  std::vector<Symbol> out;
  for (int s = 0; s < alphabet_size(); ++s) {
    if (component_[s] == c) out.push_back(s);
  }
  return out;
}

Word Sft::parse_word(std::string_view text) const {
  Word w;
  w.reserve(text.size());
  for (char ch : text) {
    const auto pos = symbols_.find(ch);
    if (pos == std::string::npos) {
      throw InputError("unknown symbol '" + std::string(1, ch) + "' in word \"" +
                       std::string(text) + "\"");
    }
    w.push_back(static_cast<Symbol>(pos));
  }
  return w;
}

std::string Sft::format_word(std::span<const Symbol> word) const {
  std::string out;
  out.reserve(word.size());
  for (Symbol s : word) out.push_back(symbols_[s]);
  return out;
}

std::int64_t count_words(const Sft& sft, int n) {
  if (n < 1) throw InputError("word length must be at least 1");
  const int m = sft.alphabet_size();
  std::vector<std::int64_t> ends(m, 1);
  for (int step = 1; step < n; ++step) {
    std::vector<std::int64_t> next(m, 0);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        if (sft.allowed(a, b)) next[b] = saturating_add(next[b], ends[a]);
      }
    }
    ends = std::move(next);
  }
  std::int64_t total = 0;
  for (auto c : ends) total = saturating_add(total, c);
  return total;
}

void for_each_word(const Sft& sft, int n,
                   const std::function<void(std::span<const Symbol>)>& visit) {
  if (n < 1) throw InputError("word length must be at least 1");
  const int m = sft.alphabet_size();
  Word word(n, 0);
  // Iterative depth-first walk; word[depth] is the next candidate symbol.
  int depth = 0;
  word[0] = 0;
  while (depth >= 0) {
    if (word[depth] >= m) {
      --depth;
      if (depth >= 0) ++word[depth];
      continue;
    }
    if (depth > 0 && !sft.allowed(word[depth - 1], word[depth])) {
      ++word[depth];
      continue;
    }
    if (depth == n - 1) {
      visit(std::span<const Symbol>(word));
      ++word[depth];
    } else {
      ++depth;
      word[depth] = 0;
    }
  }
}

std::vector<Word> enumerate_words(const Sft& sft, int n, std::int64_t cap) {
  const std::int64_t count = count_words(sft, n);
  if (count > cap) throw ResourceError("word enumeration", count, cap);
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_word(sft, n, [&](std::span<const Symbol> w) {
    out.emplace_back(w.begin(), w.end());
  });
  return out;
}

}  // namespace thermo
