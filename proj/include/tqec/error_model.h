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

#ifndef TQEC_ERROR_MODEL_H
#define TQEC_ERROR_MODEL_H

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/pauli.h"

namespace tqec {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct ErrorEntry {
    double strength = 0;
    std::vector<ErrorCode> codes;  // one code per gate qubit
    bool operator==(const ErrorEntry &) const = default;
};

/// Relative description of the errors a gate can introduce. The gate fails
/// with probability p * x; given a failure, entry i occurs with probability
/// strength_i / sum(strength).
struct ErrorModel {
    int num_qubits = 1;
    double x = 1.0;
    std::vector<ErrorEntry> entries;
    int duration = 1;
    bool operator==(const ErrorModel &) const = default;
};

struct NormalizedErrorModel {
    int num_qubits = 1;
    double x = 1.0;
    int duration = 1;
    std::vector<double> q;  // x * s_i / sum(s), scaled by p at use
    std::vector<std::array<ErrorCode, 2>> codes;
    std::vector<double> cumulative;  // cumulative s_i / sum(s)

    std::size_t size() const { return q.size(); }
};

ErrorModel parse_error_model(std::string_view text);
std::string format_error_model(const ErrorModel &model);
NormalizedErrorModel normalize(const ErrorModel &model);

/// Draws one gate application; returns the index of the entry that occurred.
std::optional<std::size_t> sample_error(const NormalizedErrorModel &model, double p, Rng &rng);

ErrorModel depolarizing_model(GateKind kind);
ErrorModel asymmetric_model(GateKind kind);

/// Error model per gate kind plus the code composition rule.
class ModelLibrary {
   public:
    ModelLibrary() = default;

    static ModelLibrary depolarizing();
    /// Measurement 10x the gate rate, idle 0.1x, and two-qubit errors
    /// containing Y or Z 100x likelier than those with only I and X.
    static ModelLibrary asymmetric();
    /// A directory with a `gates.toml` manifest mapping gate names to files.
    static ModelLibrary load_directory(const std::filesystem::path &dir);
    /// "depolarizing", "asymmetric" or a directory path.
    static ModelLibrary named(const std::string &name);

    void set(GateKind kind, const ErrorModel &model);
    const NormalizedErrorModel *find(GateKind kind) const;
    const ErrorModel *raw(GateKind kind) const;
    int duration(GateKind kind) const;

    const CompositionTable &table() const { return table_; }
    CompositionTable &table() { return table_; }
    const std::string &name() const { return name_; }

   private:
    std::string name_ = "custom";
    std::array<std::optional<ErrorModel>, kNumGateKinds> raw_;
    std::array<std::optional<NormalizedErrorModel>, kNumGateKinds> models_;
    CompositionTable table_;
};

}  // namespace tqec

#endif  // TQEC_ERROR_MODEL_H
