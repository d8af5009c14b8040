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

#include "tqec/detection.h"

#include <algorithm>

namespace tqec {

BigTClock::BigTClock(const Circuit &circuit) {
    for (const auto &set : circuit.sets) {
        std::array<int, 3> k{static_cast<int>(set.kind), set.coord.i, set.coord.j};
        if (slot_.emplace(k, static_cast<int>(slot_.size())).second) seen_.push_back(0);
    }
    remaining_ = static_cast<int>(seen_.size());
}

bool BigTClock::on_finalized(const SetDecl &set) {
    auto it = slot_.find({static_cast<int>(set.kind), set.coord.i, set.coord.j});
    if (it == slot_.end()) return false;
    if (!seen_[it->second]) {
        seen_[it->second] = 1;
        --remaining_;
    }
    if (remaining_ > 0) return false;
    std::fill(seen_.begin(), seen_.end(), 0);
    remaining_ = static_cast<int>(seen_.size());
    ++now_;
    return true;
}

std::vector<Label> odd_labels(std::span<const std::vector<Label>> lists) {
    std::vector<Label> all;
    for (const auto &l : lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.begin(), all.end());
    std::vector<Label> odd;
    for (std::size_t k = 0; k < all.size();) {
        std::size_t e = k;
        while (e < all.size() && all[e] == all[k]) ++e;
        if ((e - k) & 1) odd.push_back(all[k]);
        k = e;
    }
    return odd;
}

FinalizedSet finalize_set(const SetDecl &set, std::span<const std::vector<Label>> harvests, int big_t) {
    FinalizedSet out;
    out.set = set.id;
    for (Label label : odd_labels(harvests)) {
        out.events.push_back({label, set.id, set.kind, big_t, set.coord, set.boundary});
    }
    return out;
}

bool set_is_live(std::span<const int> measurements, std::span<const std::uint8_t> flips) {
    std::uint8_t parity = 0;
    for (int m : measurements) parity ^= flips[m];
    return parity != 0;
}

StickRequest EventRegistry::to_boundary(const DetectionEvent &event) const {
    if (!event.boundary) {
        throw StructuralError("unique detection event of label " + std::to_string(event.label) + " in set " +
                              std::to_string(event.set) + " which has no boundary");
    }
    return {event.label, event.kind, event.set, -1, *event.boundary};
}

std::optional<StickRequest> EventRegistry::pair_events(const DetectionEvent &event) {
    const auto k = key(event.label, event.kind);
    if (retired_.count(k)) {
        throw StructuralError("label " + std::to_string(event.label) + " produced more than two " +
                              std::string(kind_name(event.kind)) + " detection events");
    }
    auto it = pending_.find(k);
    if (it == pending_.end()) {
        pending_.emplace(k, event);
        return std::nullopt;
    }
    if (it->second.set == event.set) {
        throw std::logic_error("detection event registered twice for set " + std::to_string(event.set));
    }
    StickRequest req{event.label, event.kind, std::min(it->second.set, event.set), std::max(it->second.set, event.set), -1};
    max_pair_gap_ = std::max(max_pair_gap_, std::abs(event.big_t - it->second.big_t));
    retired_.emplace(k, event.big_t);
    pending_.erase(it);
    return req;
}

std::vector<StickRequest> EventRegistry::sweep_unique(int big_t) {
    std::vector<StickRequest> out;
    for (auto it = pending_.begin(); it != pending_.end();) {
        if (it->second.big_t <= big_t - retirement_) {
            out.push_back(to_boundary(it->second));
            retired_.emplace(it->first, big_t);
            it = pending_.erase(it);
        } else {
            ++it;
        }
    }
    std::sort(out.begin(), out.end(), [](const StickRequest &a, const StickRequest &b) { return a.label < b.label; });
    return out;
}

std::vector<StickRequest> EventRegistry::flush() {
    std::vector<StickRequest> out;
    for (const auto &[k, event] : pending_) {
        out.push_back(to_boundary(event));
        retired_.emplace(k, event.big_t);
    }
    pending_.clear();
    std::sort(out.begin(), out.end(), [](const StickRequest &a, const StickRequest &b) { return a.label < b.label; });
    return out;
}

void EventRegistry::forget_before(int big_t) {
    for (auto it = retired_.begin(); it != retired_.end();) {
        it = it->second < big_t ? retired_.erase(it) : std::next(it);
    }
}

}  // namespace tqec
