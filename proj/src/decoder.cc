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

#include "tqec/decoder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "tqec/matching.h"

namespace tqec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using QueueItem = std::pair<double, int>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

int find_root(std::vector<int> &parent, int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

MatchingDecoder::MatchingDecoder(const Lattice &lattice, Kind kind) : lattice_(&lattice), kind_(kind) {
    node_of_.assign(lattice.dots.size(), -1);
    for (const auto &d : lattice.dots) {
        if (d.present && d.kind == kind) {
            node_of_[d.id] = static_cast<int>(dot_of_.size());
            dot_of_.push_back(d.id);
        }
    }
    const int n = num_nodes();
    std::vector<std::vector<Edge>> adj(n);
    boundary_weight_.assign(n, kInf);
    boundary_flip_.assign(n, 0);
    boundary_id_.assign(n, -1);
    std::vector<double> direct(n, kInf);
    std::vector<char> direct_flip(n, 0);
    std::vector<int> direct_id(n, -1);
    for (const auto &line : lattice.lines) {
        if (line.kind != kind) continue;
        const int a = node(line.a);
        if (line.to_boundary()) {
            if (line.weight < direct[a] || (line.weight == direct[a] && line.boundary < direct_id[a])) {
                direct[a] = line.weight;
                direct_flip[a] = line.flip;
                direct_id[a] = line.boundary;
            }
            continue;
        }
        const int b = node(line.b);
        adj[a].push_back({b, line.weight, line.flip});
        adj[b].push_back({a, line.weight, line.flip});
    }
    offsets_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) {
        std::sort(adj[v].begin(), adj[v].end(), [](const Edge &x, const Edge &y) { return x.to < y.to; });
        offsets_[v + 1] = offsets_[v] + static_cast<int>(adj[v].size());
        edges_.insert(edges_.end(), adj[v].begin(), adj[v].end());
    }

    // Cost to reach any boundary, as one Dijkstra seeded at every boundary line.
    MinQueue queue;
    for (int v = 0; v < n; ++v) {
        if (direct_id[v] >= 0) {
            boundary_weight_[v] = direct[v];
            boundary_flip_[v] = direct_flip[v];
            boundary_id_[v] = direct_id[v];
            queue.push({direct[v], v});
        }
    }
    std::vector<char> done(n, 0);
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (done[v]) continue;
        done[v] = 1;
        for (int e = offsets_[v]; e < offsets_[v + 1]; ++e) {
            const Edge &edge = edges_[e];
            const double nd = d + edge.weight;
            if (nd < boundary_weight_[edge.to]) {
                boundary_weight_[edge.to] = nd;
                boundary_flip_[edge.to] = boundary_flip_[v] ^ edge.flip;
                boundary_id_[edge.to] = boundary_id_[v];
                queue.push({nd, edge.to});
            }
        }
    }
}

int MatchingDecoder::node(int dot) const {
    if (dot < 0 || dot >= static_cast<int>(node_of_.size()) || node_of_[dot] < 0) {
        throw std::invalid_argument("dot " + std::to_string(dot) + " is not a " + std::string(kind_name(kind_)) +
                                    " dot of the lattice");
    }
    return node_of_[dot];
}

void MatchingDecoder::dijkstra(int source, double limit, std::vector<double> &dist, std::vector<char> &flip,
                               std::vector<int> &touched, std::vector<int> *parent, double slack) const {
    MinQueue queue;
    dist[source] = 0;
    flip[source] = 0;
    touched.push_back(source);
    if (parent) (*parent)[source] = -1;
    queue.push({0.0, source});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        if (d > limit) break;
        if (d > slack + boundary_weight_[v]) continue;
        for (int e = offsets_[v]; e < offsets_[v + 1]; ++e) {
            const Edge &edge = edges_[e];
            const double nd = d + edge.weight;
            if (nd < dist[edge.to]) {
                if (dist[edge.to] == kInf) touched.push_back(edge.to);
                dist[edge.to] = nd;
                flip[edge.to] = flip[v] ^ edge.flip;
                if (parent) (*parent)[edge.to] = v;
                queue.push({nd, edge.to});
            }
        }
    }
}

std::vector<PathCost> MatchingDecoder::shortest_paths(int dot) const {
    const int n = num_nodes();
    std::vector<double> dist(n, kInf);
    std::vector<char> flip(n, 0);
    std::vector<int> touched;
    dijkstra(node(dot), kInf, dist, flip, touched);
    std::vector<PathCost> out(lattice_->dots.size(), {kInf, false});
    for (int v = 0; v < n; ++v) out[dot_of_[v]] = {dist[v], flip[v] != 0};
    return out;
}

std::vector<int> MatchingDecoder::shortest_path(int from, int to) const {
    const int n = num_nodes();
    std::vector<double> dist(n, kInf);
    std::vector<char> flip(n, 0);
    std::vector<int> touched;
    std::vector<int> parent(n, -1);
    dijkstra(node(from), kInf, dist, flip, touched, &parent);
    const int target = node(to);
    if (dist[target] == kInf) return {};
    std::vector<int> path;
    for (int v = target; v >= 0; v = parent[v]) path.push_back(dot_of_[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

PathCost MatchingDecoder::boundary_cost(int dot) const {
    const int v = node(dot);
    return {boundary_weight_[v], boundary_flip_[v] != 0};
}

int MatchingDecoder::nearest_boundary(int dot) const { return boundary_id_[node(dot)]; }

void MatchingDecoder::precompute() {
    if (!cache_weight_.empty()) return;
    const int n = num_nodes();
    cache_weight_.assign(static_cast<std::size_t>(n) * n, kInf);
    cache_flip_.assign(static_cast<std::size_t>(n) * n, 0);
    std::vector<double> dist(n, kInf);
    std::vector<char> flip(n, 0);
    std::vector<int> touched;
    for (int s = 0; s < n; ++s) {
        dijkstra(s, kInf, dist, flip, touched);
        for (int v : touched) {
            cache_weight_[static_cast<std::size_t>(s) * n + v] = dist[v];
            cache_flip_[static_cast<std::size_t>(s) * n + v] = flip[v];
            dist[v] = kInf;
        }
        touched.clear();
    }
}

MatchResult MatchingDecoder::decode(std::span<const int> events) const {
    MatchResult result;
    const int k = static_cast<int>(events.size());
    if (k == 0) return result;
    const int n = num_nodes();

    std::vector<int> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("duplicate detection event");
    }
    std::vector<int> nodes(k);
    std::vector<double> b(k);
    for (int i = 0; i < k; ++i) {
        nodes[i] = node(sorted[i]);
        b[i] = boundary_weight_[nodes[i]];
    }

    struct PairEdge {
        int i;
        int j;
        double weight;
        bool flip;
    };
    std::vector<PairEdge> pair_edges;
    if (!cache_weight_.empty()) {
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const std::size_t at = static_cast<std::size_t>(nodes[i]) * n + nodes[j];
                const double d = cache_weight_[at];
                if (d < kInf && d <= b[i] + b[j]) pair_edges.push_back({i, j, d, cache_flip_[at] != 0});
            }
        }
    } else {
        std::vector<int> event_of(n, -1);
        for (int i = 0; i < k; ++i) event_of[nodes[i]] = i;
        std::vector<double> dist(n, kInf);
        std::vector<char> flip(n, 0);
        std::vector<int> touched;
        // A useful pair has d(i, j) <= b_i + b_j <= 2 max(b_i, b_j), so each
        // pair is collected by the search from its endpoint with larger b.
        // Boundary distance is 1-Lipschitz, so a node v with d(i, v) > b_i + b_v
        // cannot lie on a useful path.
        auto owns = [&](int i, int j) { return b[j] < b[i] || (b[j] == b[i] && j < i); };
        for (int i = 0; i < k; ++i) {
            const double tol = 1e-12 * b[i];
            dijkstra(nodes[i], 2 * b[i] + tol, dist, flip, touched, nullptr, b[i] + tol);
            for (int v : touched) {
                const int j = event_of[v];
                if (j >= 0 && j != i && owns(i, j) && dist[v] <= b[i] + b[j]) {
                    pair_edges.push_back({std::min(i, j), std::max(i, j), dist[v], flip[v] != 0});
                }
            }
            for (int v : touched) dist[v] = kInf;
            touched.clear();
        }
        std::sort(pair_edges.begin(), pair_edges.end(),
                  [](const PairEdge &x, const PairEdge &y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
    }

    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto &e : pair_edges) parent[find_root(parent, e.i)] = find_root(parent, e.j);
    std::vector<std::vector<int>> members(k);
    for (int i = 0; i < k; ++i) members[find_root(parent, i)].push_back(i);
    std::vector<std::vector<const PairEdge *>> component_edges(k);
    for (const auto &e : pair_edges) component_edges[find_root(parent, e.i)].push_back(&e);

    auto to_boundary = [&](int i) {
        if (b[i] == kInf) {
            throw std::runtime_error("dot " + std::to_string(sorted[i]) + " cannot reach any boundary or partner");
        }
        result.pairs.push_back({sorted[i], -1, boundary_id_[nodes[i]], b[i], boundary_flip_[nodes[i]] != 0});
    };
    auto scaled = [](double w) { return static_cast<std::int64_t>(std::llround(w * kWeightScale)); };

    std::vector<int> local(k, -1);
    for (int root = 0; root < k; ++root) {
        const auto &group = members[root];
        if (group.empty()) continue;
        if (group.size() == 1) {
            to_boundary(group[0]);
            continue;
        }
        const int m = static_cast<int>(group.size());
        for (int x = 0; x < m; ++x) local[group[x]] = x;
        std::vector<WeightedEdge> graph;
        for (const PairEdge *e : component_edges[root]) {
            graph.push_back({local[e->i], local[e->j], scaled(e->weight)});
            graph.push_back({m + local[e->i], m + local[e->j], 0});
        }
        for (int x = 0; x < m; ++x) {
            if (b[group[x]] < kInf) graph.push_back({x, m + x, scaled(b[group[x]])});
        }
        std::vector<int> mate = min_weight_perfect_matching(2 * m, graph);
        for (const PairEdge *e : component_edges[root]) {
            if (mate[local[e->i]] == local[e->j]) {
                result.pairs.push_back({sorted[e->i], sorted[e->j], -1, e->weight, e->flip});
            }
        }
        for (int x = 0; x < m; ++x) {
            if (mate[x] == m + x) to_boundary(group[x]);
        }
    }
    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const MatchedPair &x, const MatchedPair &y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    for (const auto &p : result.pairs) {
        result.total_weight += p.weight;
        result.parity ^= p.flip;
    }
    return result;
}

WindowResult decode_window(const MatchingDecoder &decoder, std::span<const int> events, int t0, int t1, int history,
                           bool final) {
    if (history < 1) throw std::invalid_argument("history must be at least one layer");
    if (!final && t1 - t0 + 1 <= history) {
        throw std::invalid_argument("window [" + std::to_string(t0) + ", " + std::to_string(t1) +
                                    "] is not longer than the retained history of " + std::to_string(history));
    }
    const Lattice &lattice = decoder.lattice();
    for (int e : events) {
        if (lattice.dots.at(e).coord.t > t1) throw std::invalid_argument("event beyond the end of the window");
    }
    WindowResult out;
    if (events.empty()) return out;
    const MatchResult match = decoder.decode(events);
    const int frontier = t1 - history + 1;
    auto settled = [&](int dot) { return final || lattice.dots[dot].coord.t < frontier; };
    for (const auto &p : match.pairs) {
        if (settled(p.a) && (p.to_boundary() || settled(p.b))) {
            out.committed.push_back(p);
            out.parity ^= p.flip;
        } else {
            out.retained.push_back(p.a);
            if (!p.to_boundary()) out.retained.push_back(p.b);
        }
    }
    std::sort(out.retained.begin(), out.retained.end());
    return out;
}

SlidingWindowDecoder::SlidingWindowDecoder(const MatchingDecoder &decoder, int history, int stride)
    : decoder_(&decoder), history_(history), stride_(stride) {
    if (history < 1 || stride < 1) throw std::invalid_argument("history and stride must be positive");
}

bool SlidingWindowDecoder::decode(std::span<const int> events) const {
    const Lattice &lattice = decoder_->lattice();
    std::vector<int> order(events.begin(), events.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return lattice.dots.at(x).coord.t < lattice.dots.at(y).coord.t; });
    const int last = lattice.num_layers() - 1;
    bool parity = false;
    std::vector<int> pending;
    std::size_t next = 0;
    int t0 = 0;
    int t1 = history_ + stride_ - 1;
    while (true) {
        const bool final = t1 >= last;
        if (final) t1 = last;
        while (next < order.size() && lattice.dots[order[next]].coord.t <= t1) pending.push_back(order[next++]);
        WindowResult r = decode_window(*decoder_, pending, t0, t1, history_, final);
        parity ^= r.parity;
        pending = std::move(r.retained);
        if (final) break;
        t0 = t1 - history_ + 1;
        t1 += stride_;
    }
    return parity;
}

}  // namespace tqec
