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

#include "thermo/graph.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace thermo {

StronglyConnectedComponents strongly_connected_components(
    const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  constexpr int kUnvisited = -1;
  std::vector<int> index(n, kUnvisited), lowlink(n, 0), raw_label(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;  // (vertex, next edge)
  int next_index = 0;
  int raw_count = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge == 0 && index[v] == kUnvisited) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (edge < adjacency[v].size()) {
        const int w = adjacency[v][edge++];
        if (index[w] == kUnvisited) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      if (lowlink[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          raw_label[w] = raw_count;
        } while (w != v);
        ++raw_count;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
      }
    }
  }

  // Relabel by smallest member so labels do not depend on traversal order.
  std::vector<int> smallest(raw_count, std::numeric_limits<int>::max());
  for (int v = 0; v < n; ++v) {
    smallest[raw_label[v]] = std::min(smallest[raw_label[v]], v);
  }
  std::vector<int> order(raw_count);
  for (int c = 0; c < raw_count; ++c) order[c] = c;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return smallest[a] < smallest[b]; });
  std::vector<int> relabel(raw_count);
  for (int c = 0; c < raw_count; ++c) relabel[order[c]] = c;

  StronglyConnectedComponents out;
  out.count = raw_count;
  out.label.resize(n);
  for (int v = 0; v < n; ++v) out.label[v] = relabel[raw_label[v]];
  return out;
}

}  // namespace thermo
