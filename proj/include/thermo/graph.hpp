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

#pragma once

#include <vector>

namespace thermo {

struct StronglyConnectedComponents {
  int count = 0;
  /// Component label per vertex; labels are ordered by smallest member.
  std::vector<int> label;
};

/// Tarjan's algorithm, iterative so deep graphs do not exhaust the stack.
StronglyConnectedComponents strongly_connected_components(
    const std::vector<std::vector<int>>& adjacency);

}  // namespace thermo
