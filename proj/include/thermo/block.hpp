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

// Higher-block presentation: states are admissible L-words, edges are
// admissible (L+1)-words joining a word to its one-step shift.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "thermo/potential.hpp"
#include "thermo/sft.hpp"

namespace thermo {

inline constexpr std::int64_t kDefaultBlockStateCap = 4096;

struct BlockEdge {
  int from;
  int to;
  WordCode code;  ///< code of the (L+1)-word
};

/// Nontrivial strongly connected piece of the block graph.
struct BlockComponent {
  int id;                   ///< symbol component label in the Sft
  std::vector<int> states;  ///< ascending
  std::vector<int> edges;   ///< indices into BlockPresentation::edges()
};

class BlockPresentation {
 public:
  BlockPresentation(const Sft& sft, int word_length,
                    std::int64_t state_cap = kDefaultBlockStateCap);

  const Sft& sft() const { return sft_; }
  int word_length() const { return length_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  const Word& state(int i) const { return states_[i]; }
  WordCode state_code(int i) const { return codes_[i]; }
  /// -1 when the code is not an admissible word.
  int index_of(WordCode code) const;

  const std::vector<BlockEdge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int state) const { return out_[state]; }
  const std::vector<BlockComponent>& components() const { return components_; }
  /// Component slot (index into components()) per state, -1 for transient.
  int component_slot(int state) const { return slot_[state]; }

  /// Code of the first `k` symbols of an edge word, k <= L + 1.
  WordCode window_code(const BlockEdge& e, int k) const {
    return e.code / window_divisor_[k];
  }
  /// f evaluated on every edge; requires depth(f) <= L + 1.
  Eigen::VectorXd edge_values(const Potential& f) const;

 private:
  Sft sft_;
  int length_;
  std::vector<Word> states_;
  std::vector<WordCode> codes_;
  std::unordered_map<WordCode, int> index_;
  std::vector<BlockEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<BlockComponent> components_;
  std::vector<int> slot_;
  std::vector<std::int64_t> window_divisor_;
};

/// State length used for a potential of the given depth: max(depth - 1, 1).
inline int block_length_for_depth(int depth) { return depth > 1 ? depth - 1 : 1; }

}  // namespace thermo
