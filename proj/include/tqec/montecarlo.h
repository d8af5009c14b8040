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

#ifndef TQEC_MONTECARLO_H
#define TQEC_MONTECARLO_H

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/decoder.h"
#include "tqec/error_model.h"
#include "tqec/lattice.h"
#include "tqec/tracker.h"

namespace tqec {

enum class LatticeMode { Manhattan, Autotuned };
std::string_view lattice_mode_name(LatticeMode mode);
LatticeMode parse_lattice_mode(std::string_view name);

struct RunConfig {
    std::string code = "surface";
    int d = 3;
    double p = 1e-3;
    /// Rounds per decoded block; 0 means 10 d.
    int rounds_per_block = 0;
    long max_failures = 300;
    /// Stop after this many rounds even if max_failures is not reached; 0 = no limit.
    long max_rounds = 0;
    std::uint64_t seed = 1;
    LatticeMode lattice = LatticeMode::Autotuned;
    /// "depolarizing", "asymmetric" or a model directory.
    std::string models = "depolarizing";
    /// Also run X-basis memory blocks and count logical Z changes (surface code only).
    bool measure_z = false;
    int threads = 1;
    int batch_blocks = 32;
    /// Index of p within a sweep; separates random streams of sweep points.
    int stream = 0;
    /// Lattice for the decoder is built at this p when positive, otherwise at p.
    double lattice_p = 0;

    int block_rounds() const { return rounds_per_block > 0 ? rounds_per_block : 10 * d; }
};

struct RunStats {
    std::string code;
    int d = 0;
    LatticeMode lattice = LatticeMode::Autotuned;
    double p = 0;
    int rounds_per_block = 0;
    long blocks = 0;
    long rounds = 0;
    long failures_X = 0;
    long failures_Z = 0;
    long events = 0;
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    double seconds = 0;
};

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(long k, long n, double z = 1.96);

/// Decoding setup for one memory basis: circuit, lattice and decoder of the
/// observable's kind.
class BlockExperiment {
   public:
    BlockExperiment(const RunConfig &config, const ModelLibrary &models, Basis basis);
    BlockExperiment(const BlockExperiment &) = delete;
    BlockExperiment &operator=(const BlockExperiment &) = delete;

    const Circuit &circuit() const { return circuit_; }
    const CircuitIndex &index() const { return index_; }
    const Lattice &lattice() const { return lattice_; }
    const MatchingDecoder &decoder() const { return *decoder_; }
    MatchingDecoder &decoder() { return *decoder_; }
    Kind kind() const { return kind_; }

    /// Live sets of the decoded kind and the observable flip, from measurement flips.
    void events_from_flips(std::span<const std::uint8_t> flips, std::vector<int> &events, bool &observable_flip) const;
    /// One sampled block; true when the decoded block has a logical failure.
    bool sample_block(FrameSimulator &sim, double p, Rng &rng, long *num_events = nullptr) const;

   private:
    Circuit circuit_;
    CircuitIndex index_;
    Lattice lattice_;
    std::unique_ptr<MatchingDecoder> decoder_;
    Kind kind_ = Kind::Primal;
    int observable_ = 0;
    const ModelLibrary *models_;
};

/// Per-round flip probability r whose T-fold parity (1 - (1 - 2r)^T) / 2
/// equals the observed block failure fraction. Equals failures / rounds
/// while failures are rare; capped at 0.5.
double per_round_rate(double block_fraction, int rounds);

/// Deterministic stream for (seed, stream, block).
Rng block_rng(std::uint64_t seed, int stream, long block);

/// Simulates blocks until max_failures logical X changes or max_rounds.
RunStats run(const RunConfig &config);
std::vector<RunStats> run_sweep(RunConfig config, const std::vector<double> &ps);

struct InjectConfig {
    std::string code = "surface";
    int d = 3;
    int k = 1;
    /// 0 means 2 d.
    int rounds = 0;
    Basis basis = Basis::Z;
    LatticeMode lattice = LatticeMode::Autotuned;
    std::string models = "depolarizing";
    double lattice_p = 1e-5;
    /// Refuse when more distinct combinations than this would be decoded.
    long max_combinations = 100'000'000;
    std::size_t max_examples = 20;
};

struct InjectFailure {
    std::vector<ForcedFault> faults;
    std::vector<int> events;
};

struct InjectReport {
    long fault_entries = 0;
    long unique_signatures = 0;
    long combinations = 0;
    /// Distinct failing event signatures.
    long failing_signatures = 0;
    /// Fault combinations behind the failing signatures.
    long failing_combinations = 0;
    std::vector<InjectFailure> examples;
    double seconds = 0;
};

class CombinatorialLimit : public std::runtime_error {
   public:
    CombinatorialLimit(const std::string &message, double estimate) : std::runtime_error(message), estimate_(estimate) {}
    double estimate() const { return estimate_; }

   private:
    double estimate_;
};

/// Applies every single model entry (k = 1) or pair of entries (k = 2) to a
/// noiseless block and decodes; every combination whose correction leaves a
/// logical change is reported.
InjectReport inject_exhaustive(const InjectConfig &config);

double loglog_slope(const std::vector<double> &ps, const std::vector<double> &rates);

enum class CrossingStatus { Crossing, AllAbove, AllBelow };

struct ThresholdEstimate {
    CrossingStatus status = CrossingStatus::Crossing;
    double p_cross = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    int bootstrap_hits = 0;
};

/// Crossing of the log-rate curves of a small and a large distance, with a
/// parametric bootstrap interval. Throws std::invalid_argument on
/// mismatched or identical inputs.
ThresholdEstimate estimate_threshold(const std::vector<RunStats> &small_d, const std::vector<RunStats> &large_d,
                                     int bootstrap = 400, std::uint64_t seed = 7);

void write_csv_header(std::ostream &out);
void write_csv_row(std::ostream &out, const RunStats &stats);

}  // namespace tqec

#endif  // TQEC_MONTECARLO_H
