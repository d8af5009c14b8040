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

#ifndef TQEC_TRACKER_H
#define TQEC_TRACKER_H

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/error_model.h"
#include "tqec/pauli.h"

namespace tqec {

using Label = std::int64_t;

/// One possible error living on a qubit: (code, p_sr, label). Multi-qubit
/// errors appear as one entry per touched qubit with the same label.
struct TrackedError {
    ErrorCode code = kI;
    double p = 0;
    Label label = 0;
    bool operator==(const TrackedError &) const = default;
};

/// Gate location and model entry that created a label.
struct FaultSite {
    int step = -1;
    int gate = -1;
    int entry = -1;
    auto operator<=>(const FaultSite &) const = default;
};

/// Text lines "(X, 0.00500, 0)" in list order.
std::string format_errors(std::span<const TrackedError> errors, int digits = 5);

/// Analysis path: follows every possible gate error through the circuit as a
/// labeled entry on per-qubit lists kept sorted by label.
class ErrorTracker {
   public:
    ErrorTracker(int num_qubits, const ModelLibrary &models, double p);

    /// Runs one scheduled gate. Measurements return their harvest through
    /// `harvest`; other gates leave it untouched.
    void apply(const GateEvent &gate, FaultSite where, std::vector<TrackedError> *harvest = nullptr);

    void propagate(GateKind kind, std::span<const int> qubits);
    void inject(const NormalizedErrorModel &model, std::span<const int> qubits, FaultSite where);
    void init(int qubit, Basis basis, FaultSite where = {});
    std::vector<TrackedError> measure(int qubit, Basis basis, FaultSite where = {});
    void dead(int qubit, int duration);

    const std::vector<TrackedError> &errors(int qubit) const { return lists_[qubit]; }
    /// Replaces a qubit's list (used to seed states in tests).
    void set_errors(int qubit, std::vector<TrackedError> errors);
    void set_next_label(Label label);
    Label next_label() const { return next_label_; }
    long local_time(int qubit) const { return clock_[qubit]; }
    /// Number of qubit lists currently holding `label`.
    int live_copies(Label label) const;
    const FaultSite &origin(Label label) const { return origin_[label]; }
    double probability(Label label) const { return probability_[label]; }
    const ModelLibrary &models() const { return *models_; }

   private:
    void merge_into(int qubit, std::vector<TrackedError> &additions);
    void add_label_slot(Label label, FaultSite where, double p);
    void drop_copy(Label label);

    const ModelLibrary *models_;
    double p_;
    std::vector<std::vector<TrackedError>> lists_;
    std::vector<long> clock_;
    Label next_label_ = 0;
    std::vector<int> copies_;
    std::vector<FaultSite> origin_;
    std::vector<double> probability_;
    std::vector<TrackedError> scratch_a_;
    std::vector<TrackedError> scratch_b_;
};

/// A model entry forced to occur at a gate location.
struct ForcedFault {
    int step = 0;
    int gate = 0;
    int entry = 0;
    auto operator<=>(const ForcedFault &) const = default;
};

enum class LeakedMeasurement : std::uint8_t { Random, Zero };

/// Stochastic path: one Pauli frame code per qubit, conjugated by each gate
/// and composed with sampled errors. Measurement flips are reported relative
/// to the noiseless reference outcome.
class FrameSimulator {
   public:
    FrameSimulator(const Circuit &circuit, const CircuitIndex &index, const ModelLibrary &models);

    /// Samples every gate's error model at rate p; fills one flip per measurement.
    void sample(double p, Rng &rng, std::vector<std::uint8_t> &flips);
    /// Noise-free run with the given model entries applied; faults must be
    /// sorted by (step, gate). Steps before the first fault are skipped.
    void run_forced(std::span<const ForcedFault> faults, std::vector<std::uint8_t> &flips);

    LeakedMeasurement leaked_policy = LeakedMeasurement::Random;

   private:
    void gate_action(const GateEvent &g);
    void apply_entry(const NormalizedErrorModel &model, std::size_t entry, const GateEvent &g);
    void measure(const GateEvent &g, int index, std::vector<std::uint8_t> &flips, Rng *rng);

    const Circuit *circuit_;
    const CircuitIndex *index_;
    const ModelLibrary *models_;
    std::vector<ErrorCode> frame_;
    std::vector<const NormalizedErrorModel *> model_of_;
};

/// Per-set result parity from measurement flips.
std::vector<std::uint8_t> set_parities(const CircuitIndex &index, std::span<const std::uint8_t> flips);
std::vector<std::uint8_t> observable_parities(const CircuitIndex &index, std::span<const std::uint8_t> flips);

}  // namespace tqec

#endif  // TQEC_TRACKER_H
