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

#include "tqec/analysis.h"

#include <algorithm>

namespace tqec {

AnalysisResult analyze(const Circuit &circuit, const ModelLibrary &models, double p, AnalysisOptions options) {
    const CircuitIndex index(circuit);
    ErrorTracker tracker(circuit.num_qubits(), models, p);
    BigTClock clock(circuit);
    EventRegistry registry(options.retirement);
    AnalysisResult result;
    result.nest = Nest(circuit.boundaries);
    Nest &nest = result.nest;
    AnalysisStats &stats = result.stats;

    std::vector<int> observable_of_kind(2, -1);
    for (int k = static_cast<int>(circuit.observables.size()); k-- > 0;) {
        observable_of_kind[static_cast<int>(circuit.observables[k].kind)] = k;
    }

    std::vector<int> set_pending(index.num_sets());
    for (int s = 0; s < index.num_sets(); ++s) set_pending[s] = static_cast<int>(index.set_measurements(s).size());
    std::vector<int> meas_pending(index.num_measurements());
    for (int m = 0; m < index.num_measurements(); ++m) meas_pending[m] = static_cast<int>(index.sets_of(m).size());
    std::vector<std::vector<Label>> harvested(index.num_measurements());
    std::vector<std::uint8_t> &flips = result.label_flips;
    std::vector<std::uint8_t> event_count;
    int newest_t = 0;

    auto grow = [&](Label upto) {
        if (static_cast<Label>(flips.size()) < upto) {
            flips.resize(upto, 0);
            event_count.resize(upto, 0);
            if (options.record_label_events) result.label_events.resize(upto);
        }
    };
    auto make_stick = [&](const StickRequest &req) {
        Contributor c{req.label, tracker.probability(req.label), tracker.origin(req.label), false};
        nest.upsert_stick(req.kind, req.a, req.b, req.boundary, c);
        (req.boundary >= 0 ? stats.boundary_sticks : stats.pair_sticks)++;
    };

    auto finalize = [&](int s) {
        const SetDecl &set = circuit.sets[s];
        std::vector<std::vector<Label>> lists;
        for (int m : index.set_measurements(s)) lists.push_back(harvested[m]);
        const int stamp = clock.now();
        FinalizedSet fin = finalize_set(set, lists, stamp);
        nest.add_ball({set.id, set.kind, set.coord, stamp, false});
        newest_t = std::max(newest_t, set.coord.t);
        for (const auto &ev : fin.events) {
            ++stats.events;
            grow(ev.label + 1);
            if (event_count[ev.label] < 255) ++event_count[ev.label];
            if (options.record_label_events) result.label_events[ev.label].push_back(ev.set);
            if (auto req = registry.pair_events(ev)) make_stick(*req);
        }
        for (int m : index.set_measurements(s)) {
            if (--meas_pending[m] == 0) std::vector<Label>().swap(harvested[m]);
        }
        if (clock.on_finalized(set)) {
            for (const auto &req : registry.sweep_unique(clock.now())) make_stick(req);
            if (options.prune_history > 0) registry.forget_before(clock.now() - 4 * options.retirement);
        }
        if (options.prune_history > 0) {
            nest.prune(newest_t - options.prune_history);
        }
        stats.max_resident_balls = std::max(stats.max_resident_balls, nest.balls().size());
    };

    std::vector<TrackedError> harvest;
    for (int s = 0; s < static_cast<int>(circuit.steps.size()); ++s) {
        const auto &step = circuit.steps[s];
        for (int g = 0; g < static_cast<int>(step.size()); ++g) {
            const GateEvent &gate = step[g];
            if (!is_measurement(gate.kind)) {
                tracker.apply(gate, {s, g, -1});
                continue;
            }
            harvest.clear();
            tracker.apply(gate, {s, g, -1}, &harvest);
            const int m = index.measurement_at(s, g);
            auto &labels = harvested[m];
            labels.reserve(harvest.size());
            for (const auto &e : harvest) labels.push_back(e.label);
            if (!labels.empty()) grow(labels.back() + 1);
            for (int obs : index.observables_of(m)) {
                for (Label l : labels) flips[l] ^= static_cast<std::uint8_t>(1u << obs);
            }
            if (index.sets_of(m).empty()) std::vector<Label>().swap(labels);
            for (int set : index.sets_of(m)) {
                if (--set_pending[set] == 0) finalize(set);
            }
        }
    }
    for (const auto &req : registry.flush()) make_stick(req);

    stats.labels = tracker.next_label();
    grow(tracker.next_label());
    stats.max_pair_gap = registry.max_pair_gap();
    stats.final_big_t = clock.now();
    for (Label l = 0; l < stats.labels; ++l) {
        if (flips[l] && event_count[l] == 0) ++stats.undetectable_logicals;
    }
    nest.resolve_flips([&](Label l, Kind kind) {
        int obs = observable_of_kind[static_cast<int>(kind)];
        return obs >= 0 && ((flips[l] >> obs) & 1);
    });
    for (const auto *s : nest.sticks()) stats.ambiguous_flips += s->ambiguous_flip ? 1 : 0;
    result.label_origin.resize(stats.labels);
    for (Label l = 0; l < stats.labels; ++l) result.label_origin[l] = tracker.origin(l);
    return result;
}

}  // namespace tqec
