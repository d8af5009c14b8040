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

#ifndef TQEC_NEST_H
#define TQEC_NEST_H

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/tracker.h"

namespace tqec {

struct Ball {
    int id = 0;
    Kind kind = Kind::Primal;
    Coord3 coord;
    int big_t = 0;
    bool live = false;
};

struct Contributor {
    Label label = 0;
    double p = 0;
    FaultSite where;
    bool flip = false;
};

/// A connection created by single errors between two balls, or a ball and
/// a boundary (then b = -1 and boundary >= 0).
struct Stick {
    Kind kind = Kind::Primal;
    int a = 0;
    int b = -1;
    int boundary = -1;
    std::vector<Contributor> contributors;
    double p_stick = 0;
    bool flip = false;
    bool ambiguous_flip = false;

    bool to_boundary() const { return boundary >= 0; }
};

/// First-order probability that exactly one contributor occurs:
/// sum_i p_i prod_{j != i} (1 - p_j).
double stick_probability(std::span<const double> ps);

class Nest {
   public:
    Nest() = default;
    explicit Nest(std::vector<BoundaryDecl> boundaries) : boundaries_(std::move(boundaries)) {}

    void add_ball(const Ball &ball);
    /// Finds or creates the stick between `a` and `b` (or `a` and boundary
    /// `boundary` when b < 0) and appends a contributor.
    Stick &upsert_stick(Kind kind, int a, int b, int boundary, const Contributor &contributor);

    const Ball *ball(int id) const;
    const std::map<int, Ball> &balls() const { return balls_; }
    const std::vector<BoundaryDecl> &boundaries() const { return boundaries_; }
    /// Sticks ordered by (a, b, boundary).
    std::vector<const Stick *> sticks() const;
    std::size_t num_sticks() const { return sticks_.size(); }
    const Stick *find_stick(int a, int b, int boundary) const;

    /// Sets each stick's flip from its contributors (majority by probability
    /// weight); `flip_of(label, kind)` gives the observable effect of a label.
    void resolve_flips(const std::function<bool(Label, Kind)> &flip_of);

    /// Releases balls with t < t_min and every stick touching them. Values
    /// of t_min past the newest ball are clamped to it.
    void prune(int t_min);
    int min_t() const;
    int max_t() const;

   private:
    static std::uint64_t key(int a, int b, int boundary);

    std::vector<BoundaryDecl> boundaries_;
    std::map<int, Ball> balls_;
    std::unordered_map<std::uint64_t, Stick> sticks_;
};

struct NestExportOptions {
    bool provenance = false;
};

/// JSON document {"format": "tqec-nest", "version": 1, "balls": [...], "sticks": [...]}.
void export_nest(const Nest &nest, std::ostream &out, NestExportOptions options = {});

}  // namespace tqec

#endif  // TQEC_NEST_H
