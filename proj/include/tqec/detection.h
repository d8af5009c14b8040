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

#ifndef TQEC_DETECTION_H
#define TQEC_DETECTION_H

#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/tracker.h"

namespace tqec {

struct DetectionEvent {
    Label label = 0;
    int set = 0;
    Kind kind = Kind::Primal;
    int big_t = 0;
    Coord3 coord;
    std::optional<int> boundary;
};

/// Coarse clock that ticks once every stabilizer position (kind, i, j) has
/// had a set finalized since the previous tick.
class BigTClock {
   public:
    explicit BigTClock(const Circuit &circuit);

    /// Returns true when this finalization made the clock tick.
    bool on_finalized(const SetDecl &set);
    int now() const { return now_; }
    int num_stabilizers() const { return static_cast<int>(seen_.size()); }

   private:
    std::map<std::array<int, 3>, int> slot_;
    std::vector<char> seen_;
    int remaining_ = 0;
    int now_ = 0;
};

/// Labels occurring an odd number of times across the given sorted lists.
std::vector<Label> odd_labels(std::span<const std::vector<Label>> lists);

struct FinalizedSet {
    int set = 0;
    std::vector<DetectionEvent> events;
};

/// Turns a complete set into detection events, one per odd-parity label.
FinalizedSet finalize_set(const SetDecl &set, std::span<const std::vector<Label>> harvests, int big_t);

/// Stochastic counterpart: a set is live when its measurement flips have odd parity.
bool set_is_live(std::span<const int> measurements, std::span<const std::uint8_t> flips);

struct StickRequest {
    Label label = 0;
    Kind kind = Kind::Primal;
    int a = 0;
    int b = -1;
    int boundary = -1;
};

/// Pending detection events keyed by (label, kind). Pairs become sticks as
/// soon as the partner arrives; events left unique for `retirement` big_t
/// ticks go to their set's boundary.
class EventRegistry {
   public:
    explicit EventRegistry(int retirement = 3) : retirement_(retirement) {}

    std::optional<StickRequest> pair_events(const DetectionEvent &event);
    std::vector<StickRequest> sweep_unique(int big_t);
    /// End of circuit: every pending event goes to its boundary.
    std::vector<StickRequest> flush();
    /// Drops memory of labels retired before `big_t`.
    void forget_before(int big_t);

    std::size_t pending() const { return pending_.size(); }
    int max_pair_gap() const { return max_pair_gap_; }
    int retirement() const { return retirement_; }

   private:
    static std::uint64_t key(Label label, Kind kind) {
        return (static_cast<std::uint64_t>(label) << 1) | static_cast<std::uint64_t>(kind);
    }
    StickRequest to_boundary(const DetectionEvent &event) const;

    int retirement_;
    int max_pair_gap_ = 0;
    std::unordered_map<std::uint64_t, DetectionEvent> pending_;
    std::unordered_map<std::uint64_t, int> retired_;
};

}  // namespace tqec

#endif  // TQEC_DETECTION_H
