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

// One-sided subshifts of finite type and their word language.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace thermo {

using Symbol = int;
using Word = std::vector<Symbol>;
/// Base-m integer encoding of a word; numeric order is lexicographic order.
using WordCode = std::int64_t;

inline constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

/// m^length, or throws ResourceError when it does not fit in 2^62.
std::int64_t word_space_size(int alphabet_size, int length);

WordCode encode_word(std::span<const Symbol> word, int alphabet_size);
Word decode_word(WordCode code, int alphabet_size, int length);

/// Shift space on {0,...,m-1}^N cut out by a 0/1 transition matrix.
///
/// Every row and every column must contain a 1, so every symbol extends to
/// an infinite admissible sequence in both directions. Strongly connected
/// components of the symbol graph are labelled 0,1,... in order of their
/// smallest symbol.
class Sft {
 public:
  explicit Sft(Eigen::MatrixXi transitions, std::string symbols = {});

  static Sft FullShift(int alphabet_size);
  /// Two symbols, the word "11" forbidden.
  static Sft GoldenMean();
  /// Block-diagonal union; symbols of `b` are renumbered after those of `a`.
  static Sft DisjointUnion(const Sft& a, const Sft& b);

  int alphabet_size() const { return static_cast<int>(transitions_.rows()); }
  const Eigen::MatrixXi& transitions() const { return transitions_; }
  bool allowed(Symbol from, Symbol to) const {
    return transitions_(from, to) != 0;
  }
  bool admissible(std::span<const Symbol> word) const;

  const std::vector<int>& component_index() const { return component_; }
  int component_count() const { return static_cast<int>(nontrivial_.size()); }
  /// A component is nontrivial when it carries a cycle.
  bool is_nontrivial_component(int c) const { return nontrivial_[c]; }
  int nontrivial_component_count() const;
  /// One strongly connected component containing every symbol.
  bool irreducible() const { return component_count() == 1 && nontrivial_[0]; }
  std::vector<Symbol> component_symbols(int c) const;

  const std::string& symbols() const { return symbols_; }
  char label(Symbol s) const { return symbols_[s]; }
  /// Maps characters to symbols; throws InputError on unknown characters.
  Word parse_word(std::string_view text) const;
  std::string format_word(std::span<const Symbol> word) const;

 private:
  Eigen::MatrixXi transitions_;
  std::string symbols_;
  std::vector<int> component_;
  std::vector<bool> nontrivial_;
};

/// Number of admissible words of length n: the entry sum of A^(n-1),
/// saturating at INT64_MAX.
std::int64_t count_words(const Sft& sft, int n);

/// Visits every admissible word of length n in lexicographic order. The span
/// is only valid during the call.
void for_each_word(const Sft& sft, int n,
                   const std::function<void(std::span<const Symbol>)>& visit);

/// All admissible words of length n; throws ResourceError naming the cap
/// when their count exceeds `cap`.
std::vector<Word> enumerate_words(const Sft& sft, int n,
                                  std::int64_t cap = kDefaultEnumerationCap);

}  // namespace thermo
