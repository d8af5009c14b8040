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

#ifndef TQEC_CIRCUIT_H
#define TQEC_CIRCUIT_H

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tqec/pauli.h"

namespace tqec {

enum class GateKind : std::uint8_t { InitZ, InitX, MeasZ, MeasX, H, CNOT, CPhase, Identity, Dead };
inline constexpr int kNumGateKinds = 9;

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);
int gate_arity(GateKind kind);
inline bool is_init(GateKind k) { return k == GateKind::InitZ || k == GateKind::InitX; }
inline bool is_measurement(GateKind k) { return k == GateKind::MeasZ || k == GateKind::MeasX; }
inline Basis gate_basis(GateKind k) {
    return (k == GateKind::InitX || k == GateKind::MeasX) ? Basis::X : Basis::Z;
}

/// Primal sets/observables see X-type errors in the Z-basis memory, dual sets the other type.
enum class Kind : std::uint8_t { Primal, Dual };
std::string_view kind_name(Kind kind);

enum class SiteRole : std::uint8_t { Data, SyndromeX, SyndromeZ, Cluster };
std::string_view role_name(SiteRole role);

struct Coord3 {
    int i = 0;
    int j = 0;
    int t = 0;
    auto operator<=>(const Coord3 &) const = default;
};

struct QubitSite {
    int id = 0;
    int i = 0;
    int j = 0;
    int layer = 0;
    SiteRole role = SiteRole::Data;
    bool operator==(const QubitSite &) const = default;
};

struct GateEvent {
    GateKind kind = GateKind::Identity;
    std::array<int, 2> qubits{-1, -1};
    int duration = 1;

    int arity() const { return gate_arity(kind); }
    std::span<const int> targets() const { return {qubits.data(), static_cast<std::size_t>(arity())}; }
    bool operator==(const GateEvent &) const = default;
};

/// A measurement is named by its qubit and how many times that qubit was
/// measured before it (0 for the first measurement).
struct MeasRef {
    int qubit = 0;
    int round = 0;
    auto operator<=>(const MeasRef &) const = default;
};

enum class BoundaryNature : std::uint8_t { Spatial, Temporal };

struct BoundaryDecl {
    int id = 0;
    Kind kind = Kind::Primal;
    BoundaryNature nature = BoundaryNature::Spatial;
    std::string name;
    bool operator==(const BoundaryDecl &) const = default;
};

struct SetDecl {
    int id = 0;
    Kind kind = Kind::Primal;
    std::vector<MeasRef> refs;
    std::optional<int> boundary;
    Coord3 coord;
    bool operator==(const SetDecl &) const = default;
};

struct ObservableDecl {
    Kind kind = Kind::Primal;
    std::vector<MeasRef> refs;
    bool operator==(const ObservableDecl &) const = default;
};

/// One link crossed by the logical cut, between the set at (i, j) and either
/// the set at (other_i, other_j) or a boundary.
struct CutLink {
    Kind kind = Kind::Primal;
    int i = 0;
    int j = 0;
    int other_i = 0;
    int other_j = 0;
    int boundary = -1;
    bool operator==(const CutLink &) const = default;
};

struct Circuit {
    std::string name;
    int distance = 0;
    int rounds = 0;
    int period = 1;
    Coord3 spacing{1, 1, 1};
    std::vector<QubitSite> sites;
    std::vector<std::vector<GateEvent>> steps;
    std::vector<BoundaryDecl> boundaries;
    std::vector<SetDecl> sets;
    std::vector<ObservableDecl> observables;
    std::vector<CutLink> logical_cut;

    int num_qubits() const { return static_cast<int>(sites.size()); }
    bool operator==(const Circuit &) const = default;
};

struct SurfaceCodeOptions {
    int rounds = 0;  // 0 means `d`
    Basis basis = Basis::Z;
};

/// Planar surface code memory on a (2d-1) x (2d-1) grid.
Circuit build_surface_code(int d, SurfaceCodeOptions options = {});

/// Topological cluster state laid out on two physical planes, `rounds`
/// primal periods.
Circuit build_cluster_state(int d, int rounds = 0);

/// "surface" or "cluster".
Circuit build_code(std::string_view code, int d, int rounds, Basis basis = Basis::Z);

struct Measurement {
    int qubit = 0;
    int round = 0;
    int step = 0;
    int gate = 0;
    Basis basis = Basis::Z;
};

/// Derived lookup tables: the measurement order of a circuit and which sets
/// and observables each measurement feeds.
class CircuitIndex {
   public:
    explicit CircuitIndex(const Circuit &circuit);

    int num_measurements() const { return static_cast<int>(measurements_.size()); }
    int num_sets() const { return static_cast<int>(set_measurements_.size()); }
    int num_observables() const { return static_cast<int>(observable_measurements_.size()); }
    const Measurement &measurement(int index) const { return measurements_[index]; }
    std::optional<int> find(MeasRef ref) const;
    int at(MeasRef ref) const;
    /// Measurement index produced by gate `gate` of step `step`, or -1.
    int measurement_at(int step, int gate) const;

    std::span<const int> sets_of(int measurement) const;
    std::span<const int> observables_of(int measurement) const;
    std::span<const int> set_measurements(int set) const;
    std::span<const int> observable_measurements(int observable) const;
    /// Index of the last step in which a measurement of the set happens.
    int completion_step(int set) const { return completion_step_[set]; }
    std::optional<int> find_set(Kind kind, Coord3 coord) const;
    int num_layers() const { return num_layers_; }

   private:
    std::vector<Measurement> measurements_;
    std::vector<std::vector<int>> by_qubit_;
    std::vector<std::vector<int>> step_offsets_;
    std::vector<std::vector<int>> sets_of_;
    std::vector<std::vector<int>> observables_of_;
    std::vector<std::vector<int>> set_measurements_;
    std::vector<std::vector<int>> observable_measurements_;
    std::vector<int> completion_step_;
    std::map<std::pair<int, Coord3>, int> set_by_coord_;
    int num_layers_ = 0;
};

struct Violation {
    std::string code;
    std::string message;
    bool operator==(const Violation &) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool has(std::string_view code) const;
    std::string summary() const;
};

ValidationReport validate(const Circuit &circuit);

class ParseError : public std::runtime_error {
   public:
    ParseError(int line, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

   private:
    int line_;
};

class StructuralError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

Circuit parse_circuit(std::string_view text);
std::string format_circuit(const Circuit &circuit);

}  // namespace tqec

#endif  // TQEC_CIRCUIT_H
