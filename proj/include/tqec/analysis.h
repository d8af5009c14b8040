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

#ifndef TQEC_ANALYSIS_H
#define TQEC_ANALYSIS_H

#include <cstdint>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/detection.h"
#include "tqec/error_model.h"
#include "tqec/nest.h"

namespace tqec {

struct AnalysisOptions {
    int retirement = 3;
    /// Keep the list of sets where each label produced an event.
    bool record_label_events = false;
    /// When positive, balls more than this many layers behind the newest
    /// finalized set are pruned as the analysis runs.
    int prune_history = 0;
};

struct AnalysisStats {
    long labels = 0;
    long events = 0;
    long pair_sticks = 0;
    long boundary_sticks = 0;
    int max_pair_gap = 0;
    std::size_t max_resident_balls = 0;
    int final_big_t = 0;
    long ambiguous_flips = 0;
    /// Labels that flip an observable without any detection event.
    long undetectable_logicals = 0;
};

struct AnalysisResult {
    Nest nest;
    AnalysisStats stats;
    /// Bit k set when the label flips observable k.
    std::vector<std::uint8_t> label_flips;
    std::vector<std::vector<int>> label_events;
    std::vector<FaultSite> label_origin;
};

/// Runs every possible gate error of the circuit through the tracker,
/// groups harvests into sets, pairs detection events and collects sticks.
/// Throws StructuralError when a label breaks the one-pair-per-kind rule.
AnalysisResult analyze(const Circuit &circuit, const ModelLibrary &models, double p, AnalysisOptions options = {});

}  // namespace tqec

#endif  // TQEC_ANALYSIS_H
