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

#ifndef TQEC_DECODER_H
#define TQEC_DECODER_H

#include <limits>
#include <span>
#include <vector>

#include "tqec/lattice.h"

namespace tqec {

/// Path summary: total weight and whether the path crosses the logical cut
/// an odd number of times.
struct PathCost {
    double weight = 0;
    bool flip = false;
};

struct MatchedPair {
    int a = 0;
    int b = -1;
    int boundary = -1;
    double weight = 0;
    bool flip = false;

    bool to_boundary() const { return b < 0; }
};

struct MatchResult {
    std::vector<MatchedPair> pairs;
    double total_weight = 0;
    /// Crossing parity of all correction paths.
    bool parity = false;
};

/// Minimum-weight perfect matching decoder over the lines of one kind.
/// Events are matched to each other or, through per-event proxy nodes joined
/// by zero-weight edges, to the nearest boundary.
class MatchingDecoder {
   public:
    static constexpr double kWeightScale = 1e6;

    MatchingDecoder(const Lattice &lattice, Kind kind);

    Kind kind() const { return kind_; }
    const Lattice &lattice() const { return *lattice_; }
    int num_nodes() const { return static_cast<int>(dot_of_.size()); }

    /// Dijkstra from `dot` to every dot of the decoder's kind, indexed by dot id;
    /// unreachable dots have infinite weight.
    std::vector<PathCost> shortest_paths(int dot) const;
    /// Dot ids along one shortest path from `from` to `to`.
    std::vector<int> shortest_path(int from, int to) const;
    PathCost boundary_cost(int dot) const;
    int nearest_boundary(int dot) const;

    /// Caches all pairwise distances; makes repeated decodes on small
    /// lattices much cheaper.
    void precompute();

    /// Events are dot ids of the decoder's kind.
    MatchResult decode(std::span<const int> events) const;

   private:
    struct Edge {
        int to;
        double weight;
        bool flip;
    };

    int node(int dot) const;
    void dijkstra(int source, double limit, std::vector<double> &dist, std::vector<char> &flip,
                  std::vector<int> &touched, std::vector<int> *parent = nullptr, double slack = std::numeric_limits<double>::infinity()) const;

    const Lattice *lattice_;
    Kind kind_;
    std::vector<int> node_of_;
    std::vector<int> dot_of_;
    std::vector<int> offsets_;
    std::vector<Edge> edges_;
    std::vector<double> boundary_weight_;
    std::vector<char> boundary_flip_;
    std::vector<int> boundary_id_;
    std::vector<double> cache_weight_;
    std::vector<char> cache_flip_;
};

/// Logical state changed when the physical errors' cut parity differs from the correction's.
inline bool logical_failure(const MatchResult &result, bool physical_flip) { return result.parity != physical_flip; }

struct WindowResult {
    std::vector<MatchedPair> committed;
    bool parity = false;
    std::vector<int> retained;
};

/// Decodes the pending events of rounds [t0, t1] and commits the pairs whose
/// events all lie before t1 - history + 1 (all of them when `final`). The
/// rest is returned for the next window.
WindowResult decode_window(const MatchingDecoder &decoder, std::span<const int> events, int t0, int t1, int history,
                           bool final);

/// Dynamic decoding of a whole run by windows advancing `stride` layers.
class SlidingWindowDecoder {
   public:
    SlidingWindowDecoder(const MatchingDecoder &decoder, int history, int stride);

    /// Correction parity over the run.
    bool decode(std::span<const int> events) const;

   private:
    const MatchingDecoder *decoder_;
    int history_;
    int stride_;
};

}  // namespace tqec

#endif  // TQEC_DECODER_H
