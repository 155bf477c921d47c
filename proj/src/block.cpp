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

#include "thermo/block.hpp"

#include <string>

#include "thermo/errors.hpp"
#include "thermo/graph.hpp"

namespace thermo {

BlockPresentation::BlockPresentation(const Sft& sft, int word_length,
                                     std::int64_t state_cap)
    : sft_(sft), length_(word_length) {
  if (word_length < 1) throw InputError("block word length must be at least 1");
  const std::int64_t count = count_words(sft, word_length);
  if (count > state_cap) throw ResourceError("block state", count, state_cap);

  const int m = sft.alphabet_size();
  for_each_word(sft, word_length, [&](std::span<const Symbol> w) {
    index_.emplace(encode_word(w, m), static_cast<int>(states_.size()));
    codes_.push_back(encode_word(w, m));
    states_.emplace_back(w.begin(), w.end());
  });

  const std::int64_t tail = word_space_size(m, word_length - 1);
  out_.resize(states_.size());
  std::vector<std::vector<int>> adjacency(states_.size());
  for (int u = 0; u < state_count(); ++u) {
    const Symbol last = states_[u].back();
    for (Symbol a = 0; a < m; ++a) {
      if (!sft.allowed(last, a)) continue;
      const WordCode next = (codes_[u] % tail) * m + a;
      const int v = index_of(next);
      if (v < 0) continue;
      out_[u].push_back(static_cast<int>(edges_.size()));
      edges_.push_back({u, v, codes_[u] * m + a});
      adjacency[u].push_back(v);
    }
  }

  window_divisor_.resize(word_length + 2);
  for (int k = 0; k <= word_length + 1; ++k) {
    window_divisor_[k] = word_space_size(m, word_length + 1 - k);
  }

  const StronglyConnectedComponents scc = strongly_connected_components(adjacency);
  std::vector<bool> cyclic(scc.count, false);
  for (const auto& e : edges_) {
    if (scc.label[e.from] == scc.label[e.to]) cyclic[scc.label[e.from]] = true;
  }
  std::vector<int> slot_of_label(scc.count, -1);
  for (int c = 0; c < scc.count; ++c) {
    if (!cyclic[c]) continue;
    slot_of_label[c] = static_cast<int>(components_.size());
    components_.push_back({-1, {}, {}});
  }
  slot_.assign(states_.size(), -1);
  for (int u = 0; u < state_count(); ++u) {
    const int s = slot_of_label[scc.label[u]];
    slot_[u] = s;
    if (s < 0) continue;
    components_[s].states.push_back(u);
    components_[s].id = sft.component_index()[states_[u].front()];
  }
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const int s = slot_[edges_[e].from];
    if (s >= 0 && slot_[edges_[e].to] == s) components_[s].edges.push_back(e);
  }
}

int BlockPresentation::index_of(WordCode code) const {
  const auto it = index_.find(code);
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd BlockPresentation::edge_values(const Potential& f) const {
  if (f.depth() > length_ + 1) {
    throw InputError("potential depth " + std::to_string(f.depth()) +
                     " exceeds block edge length " + std::to_string(length_ + 1));
  }
  Eigen::VectorXd v(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    v[e] = f.at(window_code(edges_[e], f.depth()));
  }
  return v;
}

}  // namespace thermo
