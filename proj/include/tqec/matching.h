// Copyright 2026 The tqec Authors
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

#ifndef TQEC_MATCHING_H
#define TQEC_MATCHING_H

#include <cstdint>
#include <span>
#include <vector>

namespace tqec {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    std::int64_t weight = 0;
};

/// Edmonds' blossom algorithm in the primal-dual form of Galil, O(n^3).
/// Returns mate[v] (or -1). With `max_cardinality` the matching has maximum
/// cardinality first and maximum weight among those.
std::vector<int> max_weight_matching(int num_vertices, std::span<const WeightedEdge> edges, bool max_cardinality);

/// Minimum total weight perfect matching. Edges are visited in (u, v) order,
/// so ties resolve the same way on every call. Throws std::invalid_argument
/// when no perfect matching exists.
std::vector<int> min_weight_perfect_matching(int num_vertices, std::span<const WeightedEdge> edges);

}  // namespace tqec

#endif  // TQEC_MATCHING_H
