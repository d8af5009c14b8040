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

#include "tqec/circuit.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace tqec {

namespace {

constexpr std::array<std::string_view, kNumGateKinds> kGateNames = {
    "INITZ", "INITX", "MEASZ", "MEASX", "H", "CNOT", "CPHASE", "IDENTITY", "DEAD"};

enum BoundaryId : int {
    kLeft = 0,
    kRight = 1,
    kTop = 2,
    kBottom = 3,
    kInitialPrimal = 4,
    kFinalPrimal = 5,
    kInitialDual = 6,
    kFinalDual = 7,
};

std::vector<BoundaryDecl> standard_boundaries() {
    return {
        {kLeft, Kind::Primal, BoundaryNature::Spatial, "left"},
        {kRight, Kind::Primal, BoundaryNature::Spatial, "right"},
        {kTop, Kind::Dual, BoundaryNature::Spatial, "top"},
        {kBottom, Kind::Dual, BoundaryNature::Spatial, "bottom"},
        {kInitialPrimal, Kind::Primal, BoundaryNature::Temporal, "initial"},
        {kFinalPrimal, Kind::Primal, BoundaryNature::Temporal, "final"},
        {kInitialDual, Kind::Dual, BoundaryNature::Temporal, "initial"},
        {kFinalDual, Kind::Dual, BoundaryNature::Temporal, "final"},
    };
}

void add_gate(Circuit &c, int step, GateKind kind, int a, int b = -1) {
    if (static_cast<int>(c.steps.size()) <= step) c.steps.resize(step + 1);
    c.steps[step].push_back(GateEvent{kind, {a, b}, 1});
}

/// Gives IDENTITY to every live qubit (between an INIT and its MEAS) that
/// has no gate in a step, then sorts each step by first target.
void fill_idle(Circuit &c) {
    const int n = c.num_qubits();
    std::vector<char> live(n, 0);
    for (auto &step : c.steps) {
        std::vector<char> used(n, 0);
        std::vector<char> ends(n, 0);
        for (const auto &g : step) {
            for (int q : g.targets()) {
                used[q] = 1;
                if (is_init(g.kind)) live[q] = 1;
                if (is_measurement(g.kind)) ends[q] = 1;
            }
        }
        for (int q = 0; q < n; ++q) {
            if (live[q] && !used[q]) step.push_back(GateEvent{GateKind::Identity, {q, -1}, 1});
            if (ends[q]) live[q] = 0;
        }
        std::sort(step.begin(), step.end(), [](const GateEvent &x, const GateEvent &y) {
            return x.qubits[0] < y.qubits[0];
        });
    }
}

void check_distance(int d) {
    if (d < 2) throw std::invalid_argument("invalid distance " + std::to_string(d) + " (needs d >= 2)");
}

}  // namespace

std::string_view gate_name(GateKind kind) { return kGateNames[static_cast<int>(kind)]; }

std::optional<GateKind> parse_gate_name(std::string_view name) {
    for (int k = 0; k < kNumGateKinds; ++k) {
        if (kGateNames[k] == name) return static_cast<GateKind>(k);
    }
    if (name == "INIT_Z") return GateKind::InitZ;
    if (name == "INIT_X") return GateKind::InitX;
    if (name == "MEAS_Z") return GateKind::MeasZ;
    if (name == "MEAS_X") return GateKind::MeasX;
    if (name == "CZ") return GateKind::CPhase;
    if (name == "I") return GateKind::Identity;
    return std::nullopt;
}

int gate_arity(GateKind kind) { return (kind == GateKind::CNOT || kind == GateKind::CPhase) ? 2 : 1; }

std::string_view kind_name(Kind kind) { return kind == Kind::Primal ? "primal" : "dual"; }

std::string_view role_name(SiteRole role) {
    switch (role) {
        case SiteRole::Data:
            return "data";
        case SiteRole::SyndromeX:
            return "syndrome_x";
        case SiteRole::SyndromeZ:
            return "syndrome_z";
        default:
            return "cluster";
    }
}

Circuit build_surface_code(int d, SurfaceCodeOptions options) {
    check_distance(d);
    const int T = options.rounds == 0 ? d : options.rounds;
    if (T < 2) throw std::invalid_argument("surface code memory needs at least 2 rounds, got " + std::to_string(T));
    const int n = 2 * d - 1;
    const bool z_memory = options.basis == Basis::Z;

    Circuit c;
    c.name = "surface";
    c.distance = d;
    c.rounds = T;
    c.period = 8;
    c.spacing = {2, 2, 1};
    c.boundaries = standard_boundaries();
    auto id = [n](int i, int j) { return i * n + j; };
    auto inside = [n](int i, int j) { return i >= 0 && j >= 0 && i < n && j < n; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            SiteRole role = (i + j) % 2 == 0 ? SiteRole::Data : (i % 2 == 0 ? SiteRole::SyndromeZ : SiteRole::SyndromeX);
            c.sites.push_back({id(i, j), i, j, 0, role});
        }
    }
    c.steps.resize(8 * (T + 1));

    constexpr std::array<std::array<int, 2>, 4> z_order = {{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
    constexpr std::array<std::array<int, 2>, 4> x_order = {{{-1, 0}, {0, 1}, {0, -1}, {1, 0}}};
    for (int r = 0; r < T; ++r) {
        const int base = 8 * r;
        for (const auto &s : c.sites) {
            if (s.role != SiteRole::Data) {
                add_gate(c, base, GateKind::InitZ, s.id);
            } else if (r == 0) {
                add_gate(c, base, z_memory ? GateKind::InitZ : GateKind::InitX, s.id);
            }
            if (s.role == SiteRole::SyndromeX) {
                add_gate(c, base + 1, GateKind::H, s.id);
                add_gate(c, base + 6, GateKind::H, s.id);
            }
            if (s.role == SiteRole::Data) continue;
            const auto &order = s.role == SiteRole::SyndromeZ ? z_order : x_order;
            for (int k = 0; k < 4; ++k) {
                int di = s.i + order[k][0];
                int dj = s.j + order[k][1];
                if (!inside(di, dj)) continue;
                if (s.role == SiteRole::SyndromeZ) {
                    add_gate(c, base + 2 + k, GateKind::CNOT, id(di, dj), s.id);
                } else {
                    add_gate(c, base + 2 + k, GateKind::CNOT, s.id, id(di, dj));
                }
            }
            add_gate(c, base + 7, GateKind::MeasZ, s.id);
        }
    }
    for (const auto &s : c.sites) {
        if (s.role == SiteRole::Data) add_gate(c, 8 * T, z_memory ? GateKind::MeasZ : GateKind::MeasX, s.id);
    }
    fill_idle(c);

    // Sets are emitted layer by layer, primal before dual.
    const Kind memory_kind = z_memory ? Kind::Primal : Kind::Dual;
    auto spatial_boundary = [d](Kind kind, int i, int j) -> std::optional<int> {
        if (kind == Kind::Primal) {
            if (j == 1) return kLeft;
            if (j == 2 * d - 3) return kRight;
        } else {
            if (i == 1) return kTop;
            if (i == 2 * d - 3) return kBottom;
        }
        return std::nullopt;
    };
    for (int t = 0; t <= T; ++t) {
        for (Kind kind : {Kind::Primal, Kind::Dual}) {
            const SiteRole role = kind == Kind::Primal ? SiteRole::SyndromeZ : SiteRole::SyndromeX;
            const int initial = kind == Kind::Primal ? kInitialPrimal : kInitialDual;
            const int final = kind == Kind::Primal ? kFinalPrimal : kFinalDual;
            const bool deterministic_start = kind == memory_kind;
            for (const auto &s : c.sites) {
                if (s.role != role) continue;
                SetDecl set;
                set.kind = kind;
                set.coord = {s.i, s.j, t};
                auto spatial = spatial_boundary(kind, s.i, s.j);
                if (deterministic_start) {
                    if (t == 0) {
                        set.refs = {{s.id, 0}};
                        set.boundary = spatial ? spatial : std::optional<int>(initial);
                    } else if (t < T) {
                        set.refs = {{s.id, t - 1}, {s.id, t}};
                        set.boundary = spatial;
                    } else {
                        set.refs = {{s.id, T - 1}};
                        for (const auto &dir : z_order) {
                            int di = s.i + dir[0];
                            int dj = s.j + dir[1];
                            if (inside(di, dj)) set.refs.push_back({id(di, dj), 0});
                        }
                        set.boundary = spatial ? spatial : std::optional<int>(final);
                    }
                } else {
                    if (t == 0 || t == T) continue;
                    set.refs = {{s.id, t - 1}, {s.id, t}};
                    if (spatial) {
                        set.boundary = spatial;
                    } else if (t == 1) {
                        set.boundary = initial;
                    } else if (t == T - 1) {
                        set.boundary = final;
                    }
                }
                std::sort(set.refs.begin(), set.refs.end());
                set.id = static_cast<int>(c.sets.size());
                c.sets.push_back(std::move(set));
            }
        }
    }

    ObservableDecl obs;
    obs.kind = memory_kind;
    for (int k = 0; k < n; k += 2) {
        if (z_memory) {
            obs.refs.push_back({id(k, 0), 0});
            c.logical_cut.push_back({Kind::Primal, k, 1, 0, 0, kLeft});
        } else {
            obs.refs.push_back({id(0, k), 0});
            c.logical_cut.push_back({Kind::Dual, 1, k, 0, 0, kTop});
        }
    }
    c.observables.push_back(std::move(obs));
    return c;
}

Circuit build_cluster_state(int d, int rounds) {
    check_distance(d);
    const int T = rounds == 0 ? d : rounds;
    if (T < 1) throw std::invalid_argument("cluster state needs at least 1 round");
    const int xmax = 2 * d - 2;
    const int ymin = 1;
    const int ymax = 2 * d - 1;
    const int zmax = 2 * T + 1;
    const int shift = 2 * d - 2;

    Circuit c;
    c.name = "cluster";
    c.distance = d;
    c.rounds = T;
    c.period = 10;
    c.spacing = {2, 2, 1};
    c.boundaries = standard_boundaries();

    // plane 0 holds even slices, plane 1 odd slices.
    std::map<std::array<int, 3>, int> site_of;
    for (int plane = 0; plane < 2; ++plane) {
        for (int x = 0; x <= xmax; ++x) {
            for (int y = ymin; y <= ymax; ++y) {
                int odd = (x & 1) + (y & 1);
                bool present = plane == 0 ? odd >= 1 : odd <= 1;
                if (!present) continue;
                int id = c.num_qubits();
                c.sites.push_back({id, x + y + plane, y - x + shift, 0, SiteRole::Cluster});
                site_of[{plane, x, y}] = id;
            }
        }
    }
    auto qubit = [&](int x, int y, int z) -> int {
        if (x < 0 || x > xmax || y < ymin || y > ymax || z < 1 || z > zmax) return -1;
        auto it = site_of.find({z & 1, x, y});
        return it == site_of.end() ? -1 : it->second;
    };
    auto occurrence = [](int z) { return (z & 1) ? (z - 1) / 2 : (z - 2) / 2; };

    c.steps.resize(10 * (T + 1));
    constexpr std::array<std::array<int, 2>, 4> in_plane = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    for (int z = 1; z <= zmax; ++z) {
        const int t0 = 5 * (z - 1);
        const int plane = z & 1;
        for (int x = 0; x <= xmax; ++x) {
            for (int y = ymin; y <= ymax; ++y) {
                int q = qubit(x, y, z);
                if (q < 0) continue;
                add_gate(c, t0, GateKind::InitZ, q);
                add_gate(c, t0 + 1, GateKind::H, q);
                if (z > 1) {
                    int below = qubit(x, y, z - 1);
                    if (below >= 0) add_gate(c, t0 + 2, GateKind::CPhase, below, q);
                }
                bool hub = plane == 0 ? ((x & 1) && (y & 1)) : (!(x & 1) && !(y & 1));
                if (hub) {
                    for (int k = 0; k < 4; ++k) {
                        int other = qubit(x + in_plane[k][0], y + in_plane[k][1], z);
                        if (other >= 0) add_gate(c, t0 + 3 + k, GateKind::CPhase, q, other);
                    }
                }
                add_gate(c, t0 + 8, GateKind::H, q);
                add_gate(c, t0 + 9, GateKind::MeasZ, q);
            }
        }
    }
    fill_idle(c);

    auto add_set = [&](Kind kind, int x, int y, int z, std::optional<int> boundary) {
        SetDecl set;
        set.kind = kind;
        set.coord = {x, y, z / 2};
        set.boundary = boundary;
        constexpr std::array<std::array<int, 3>, 6> around = {
            {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
        for (const auto &dv : around) {
            int fz = z + dv[2];
            int q = qubit(x + dv[0], y + dv[1], fz);
            if (q >= 0) set.refs.push_back({q, occurrence(fz)});
        }
        std::sort(set.refs.begin(), set.refs.end());
        set.id = static_cast<int>(c.sets.size());
        c.sets.push_back(std::move(set));
    };
    for (int t = 0; t <= T; ++t) {
        const int zp = 2 * t + 1;
        for (int x = 1; x <= xmax; x += 2) {
            for (int y = 1; y <= ymax; y += 2) {
                std::optional<int> b;
                if (x == 1) {
                    b = kLeft;
                } else if (x == 2 * d - 3) {
                    b = kRight;
                }
                add_set(Kind::Primal, x, y, zp, b);
            }
        }
        if (t == 0) continue;
        const int zd = 2 * t;
        for (int x = 0; x <= xmax; x += 2) {
            for (int y = 2; y <= ymax - 1; y += 2) {
                std::optional<int> b;
                if (y == 2) {
                    b = kTop;
                } else if (y == 2 * d - 2) {
                    b = kBottom;
                } else if (zd == 2) {
                    b = kInitialDual;
                } else if (zd == 2 * T) {
                    b = kFinalDual;
                }
                add_set(Kind::Dual, x, y, zd, b);
            }
        }
    }

    ObservableDecl obs;
    obs.kind = Kind::Primal;
    for (int y = 1; y <= ymax; y += 2) {
        for (int z = 1; z <= zmax; z += 2) obs.refs.push_back({qubit(0, y, z), occurrence(z)});
        c.logical_cut.push_back({Kind::Primal, 1, y, 0, 0, kLeft});
    }
    std::sort(obs.refs.begin(), obs.refs.end());
    c.observables.push_back(std::move(obs));
    return c;
}

Circuit build_code(std::string_view code, int d, int rounds, Basis basis) {
    if (code == "surface") return build_surface_code(d, {rounds, basis});
    if (code == "cluster") {
        if (basis != Basis::Z) throw std::invalid_argument("cluster state only supports the primal observable");
        return build_cluster_state(d, rounds);
    }
    throw std::invalid_argument("unknown code '" + std::string(code) + "' (expected surface or cluster)");
}

CircuitIndex::CircuitIndex(const Circuit &circuit) {
    const int n = circuit.num_qubits();
    by_qubit_.resize(n);
    step_offsets_.resize(circuit.steps.size());
    for (int s = 0; s < static_cast<int>(circuit.steps.size()); ++s) {
        const auto &step = circuit.steps[s];
        step_offsets_[s].assign(step.size(), -1);
        for (int g = 0; g < static_cast<int>(step.size()); ++g) {
            const auto &gate = step[g];
            if (!is_measurement(gate.kind)) continue;
            int q = gate.qubits[0];
            if (q < 0 || q >= n) continue;
            int index = static_cast<int>(measurements_.size());
            measurements_.push_back({q, static_cast<int>(by_qubit_[q].size()), s, g, gate_basis(gate.kind)});
            by_qubit_[q].push_back(index);
            step_offsets_[s][g] = index;
        }
    }
    sets_of_.resize(measurements_.size());
    observables_of_.resize(measurements_.size());
    set_measurements_.resize(circuit.sets.size());
    completion_step_.assign(circuit.sets.size(), -1);
    for (int k = 0; k < static_cast<int>(circuit.sets.size()); ++k) {
        const auto &set = circuit.sets[k];
        for (const auto &ref : set.refs) {
            auto m = find(ref);
            if (!m) continue;
            set_measurements_[k].push_back(*m);
            sets_of_[*m].push_back(k);
            completion_step_[k] = std::max(completion_step_[k], measurements_[*m].step);
        }
        set_by_coord_[{static_cast<int>(set.kind), set.coord}] = k;
        num_layers_ = std::max(num_layers_, set.coord.t + 1);
    }
    observable_measurements_.resize(circuit.observables.size());
    for (int k = 0; k < static_cast<int>(circuit.observables.size()); ++k) {
        for (const auto &ref : circuit.observables[k].refs) {
            auto m = find(ref);
            if (!m) continue;
            observable_measurements_[k].push_back(*m);
            observables_of_[*m].push_back(k);
        }
    }
}

std::optional<int> CircuitIndex::find(MeasRef ref) const {
    if (ref.qubit < 0 || ref.qubit >= static_cast<int>(by_qubit_.size())) return std::nullopt;
    const auto &list = by_qubit_[ref.qubit];
    if (ref.round < 0 || ref.round >= static_cast<int>(list.size())) return std::nullopt;
    return list[ref.round];
}

int CircuitIndex::at(MeasRef ref) const {
    auto m = find(ref);
    if (!m) {
        throw std::out_of_range("no measurement (" + std::to_string(ref.qubit) + ", " + std::to_string(ref.round) + ")");
    }
    return *m;
}

int CircuitIndex::measurement_at(int step, int gate) const { return step_offsets_[step][gate]; }

std::span<const int> CircuitIndex::sets_of(int measurement) const { return sets_of_[measurement]; }
std::span<const int> CircuitIndex::observables_of(int measurement) const { return observables_of_[measurement]; }
std::span<const int> CircuitIndex::set_measurements(int set) const { return set_measurements_[set]; }
std::span<const int> CircuitIndex::observable_measurements(int observable) const {
    return observable_measurements_[observable];
}

std::optional<int> CircuitIndex::find_set(Kind kind, Coord3 coord) const {
    auto it = set_by_coord_.find({static_cast<int>(kind), coord});
    if (it == set_by_coord_.end()) return std::nullopt;
    return it->second;
}

bool ValidationReport::has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation &v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto &v : violations) out += v.code + ": " + v.message + "\n";
    return out;
}

ValidationReport validate(const Circuit &circuit) {
    ValidationReport report;
    auto fail = [&](std::string code, std::string message) {
        report.violations.push_back({std::move(code), std::move(message)});
    };
    const int n = circuit.num_qubits();
    std::set<std::array<int, 3>> positions;
    for (int q = 0; q < n; ++q) {
        const auto &s = circuit.sites[q];
        if (s.id != q) fail("site-id", "site at index " + std::to_string(q) + " has id " + std::to_string(s.id));
        if (!positions.insert({s.i, s.j, s.layer}).second) {
            fail("site-coord", "two sites at (" + std::to_string(s.i) + ", " + std::to_string(s.j) + ")");
        }
    }

    std::vector<char> initialized(n, 0);
    for (int st = 0; st < static_cast<int>(circuit.steps.size()); ++st) {
        std::vector<char> used(n, 0);
        const std::string where = "step " + std::to_string(st);
        for (const auto &g : circuit.steps[st]) {
            bool valid = true;
            for (int q : g.targets()) {
                if (q < 0 || q >= n) {
                    fail("gate-qubit", where + ": " + std::string(gate_name(g.kind)) + " on unknown qubit " + std::to_string(q));
                    valid = false;
                }
            }
            if (!valid) continue;
            if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
                fail("gate-arity", where + ": two-qubit gate on a single qubit " + std::to_string(g.qubits[0]));
                continue;
            }
            for (int q : g.targets()) {
                if (used[q]) fail("qubit-busy", where + ": qubit " + std::to_string(q) + " used twice");
                used[q] = 1;
            }
            if (g.arity() == 2) {
                const auto &a = circuit.sites[g.qubits[0]];
                const auto &b = circuit.sites[g.qubits[1]];
                if (std::abs(a.i - b.i) > 1 || std::abs(a.j - b.j) > 1 || std::abs(a.layer - b.layer) > 1) {
                    fail("non-local", where + ": " + std::string(gate_name(g.kind)) + " between non-adjacent qubits " +
                                          std::to_string(a.id) + " and " + std::to_string(b.id));
                }
            }
            if (is_init(g.kind)) {
                initialized[g.qubits[0]] = 1;
            } else if (g.kind == GateKind::Dead) {
                if (g.duration < 1) fail("dead-duration", where + ": DEAD needs a positive duration");
            } else {
                for (int q : g.targets()) {
                    if (!initialized[q]) {
                        fail(is_measurement(g.kind) ? "meas-uninit" : "gate-uninit",
                             where + ": " + std::string(gate_name(g.kind)) + " on qubit " + std::to_string(q) +
                                 " before initialization");
                    }
                }
                if (is_measurement(g.kind)) initialized[g.qubits[0]] = 0;
            }
        }
    }

    if (circuit.period < 1 || circuit.steps.size() % circuit.period != 0) {
        fail("period", "period " + std::to_string(circuit.period) + " does not divide schedule length " +
                           std::to_string(circuit.steps.size()));
    } else {
        for (std::size_t p0 = 0; p0 < circuit.steps.size(); p0 += circuit.period) {
            std::vector<int> count(n, 0);
            bool syndrome_period = false;
            for (std::size_t st = p0; st < p0 + circuit.period; ++st) {
                for (const auto &g : circuit.steps[st]) {
                    if (!is_measurement(g.kind) || g.qubits[0] < 0 || g.qubits[0] >= n) continue;
                    ++count[g.qubits[0]];
                    auto role = circuit.sites[g.qubits[0]].role;
                    if (role == SiteRole::SyndromeX || role == SiteRole::SyndromeZ) syndrome_period = true;
                }
            }
            for (int q = 0; q < n; ++q) {
                auto role = circuit.sites[q].role;
                bool syndrome = role == SiteRole::SyndromeX || role == SiteRole::SyndromeZ;
                if (count[q] > 1 || (syndrome_period && syndrome && count[q] != 1)) {
                    fail("period-measurement", "qubit " + std::to_string(q) + " measured " + std::to_string(count[q]) +
                                                   " times in the period starting at step " + std::to_string(p0));
                }
            }
        }
    }

    CircuitIndex index(circuit);
    std::map<int, const BoundaryDecl *> boundaries;
    for (const auto &b : circuit.boundaries) boundaries[b.id] = &b;
    std::vector<int> coverage(index.num_measurements(), 0);
    std::vector<int> with_boundary(index.num_measurements(), 0);
    for (int k = 0; k < static_cast<int>(circuit.sets.size()); ++k) {
        const auto &set = circuit.sets[k];
        const std::string name = "set " + std::to_string(set.id);
        if (set.id != k) fail("set-id", name + " stored at index " + std::to_string(k));
        if (set.boundary) {
            auto it = boundaries.find(*set.boundary);
            if (it == boundaries.end()) {
                fail("set-boundary", name + " names unknown boundary " + std::to_string(*set.boundary));
            } else if (it->second->kind != set.kind) {
                fail("set-boundary", name + " uses a boundary of the other kind");
            }
        }
        for (const auto &ref : set.refs) {
            auto m = index.find(ref);
            if (!m) {
                fail("set-ref", name + " references missing measurement (" + std::to_string(ref.qubit) + ", " +
                                    std::to_string(ref.round) + ")");
                continue;
            }
            ++coverage[*m];
            if (set.boundary) ++with_boundary[*m];
        }
    }
    for (int m = 0; m < index.num_measurements(); ++m) {
        const auto &meas = index.measurement(m);
        const std::string name =
            "measurement (" + std::to_string(meas.qubit) + ", " + std::to_string(meas.round) + ")";
        if (coverage[m] > 2) {
            fail("meas-coverage", name + " belongs to " + std::to_string(coverage[m]) + " sets");
        } else if (coverage[m] == 1 && with_boundary[m] == 0) {
            fail("meas-coverage", name + " belongs to one set without a boundary");
        } else if (coverage[m] == 0) {
            fail("meas-coverage", name + " belongs to no set");
        }
    }
    for (const auto &obs : circuit.observables) {
        for (const auto &ref : obs.refs) {
            if (!index.find(ref)) {
                fail("observable-ref", "observable references missing measurement (" + std::to_string(ref.qubit) +
                                           ", " + std::to_string(ref.round) + ")");
            }
        }
    }
    return report;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r' || line[k] == ',')) ++k;
        if (k >= line.size()) break;
        if (line[k] == '(' || line[k] == ')' || line[k] == '@') {
            out.push_back(line.substr(k, 1));
            ++k;
            continue;
        }
        std::size_t start = k;
        while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r' && line[k] != ',' &&
               line[k] != '(' && line[k] != ')' && line[k] != '@') {
            ++k;
        }
        out.push_back(line.substr(start, k - start));
    }
    return out;
}

int to_int(std::string_view s, int line, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(line, "expected integer " + std::string(what) + ", got '" + std::string(s) + "'");
    }
    return value;
}

Kind to_kind(std::string_view s, int line) {
    if (s == "primal") return Kind::Primal;
    if (s == "dual") return Kind::Dual;
    throw ParseError(line, "expected primal or dual, got '" + std::string(s) + "'");
}

SiteRole to_role(std::string_view s, int line) {
    for (SiteRole r : {SiteRole::Data, SiteRole::SyndromeX, SiteRole::SyndromeZ, SiteRole::Cluster}) {
        if (role_name(r) == s) return r;
    }
    throw ParseError(line, "unknown qubit role '" + std::string(s) + "'");
}

std::vector<MeasRef> parse_refs(const std::vector<std::string_view> &tok, std::size_t from, int line) {
    std::vector<MeasRef> refs;
    std::size_t k = from;
    while (k < tok.size()) {
        if (tok[k] != "(" || k + 3 >= tok.size() || tok[k + 3] != ")") {
            throw ParseError(line, "expected measurement reference '(qubit, round)'");
        }
        refs.push_back({to_int(tok[k + 1], line, "qubit"), to_int(tok[k + 2], line, "round")});
        k += 4;
    }
    return refs;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    Circuit c;
    enum class Section { None, Qubits, Step, Set, Observable } section = Section::None;
    int current_step = -1;
    bool seen_header = false;
    std::vector<int> set_lines;
    std::vector<int> observable_lines;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = tokenize(line);
        if (tok.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::string_view key = tok[0];
        seen_header = true;
        auto need = [&](std::size_t count) {
            if (tok.size() < count) throw ParseError(line_no, "missing argument for " + std::string(key));
        };
        if (key == "CIRCUIT") {
            need(2);
            c.name = std::string(tok[1]);
        } else if (key == "DISTANCE") {
            need(2);
            c.distance = to_int(tok[1], line_no, "distance");
        } else if (key == "ROUNDS") {
            need(2);
            c.rounds = to_int(tok[1], line_no, "rounds");
        } else if (key == "PERIOD") {
            need(2);
            c.period = to_int(tok[1], line_no, "period");
        } else if (key == "SPACING") {
            need(4);
            c.spacing = {to_int(tok[1], line_no, "spacing"), to_int(tok[2], line_no, "spacing"),
                         to_int(tok[3], line_no, "spacing")};
        } else if (key == "QUBITS") {
            section = Section::Qubits;
        } else if (key == "BOUNDARY") {
            // BOUNDARY id kind nature [name]
            need(4);
            BoundaryDecl b;
            b.id = to_int(tok[1], line_no, "boundary id");
            b.kind = to_kind(tok[2], line_no);
            if (tok[3] == "spatial") {
                b.nature = BoundaryNature::Spatial;
            } else if (tok[3] == "temporal") {
                b.nature = BoundaryNature::Temporal;
            } else {
                throw ParseError(line_no, "expected spatial or temporal, got '" + std::string(tok[3]) + "'");
            }
            if (tok.size() > 4) b.name = std::string(tok[4]);
            c.boundaries.push_back(b);
        } else if (key == "STEP") {
            need(2);
            int s = to_int(tok[1], line_no, "step");
            if (s <= current_step) throw ParseError(line_no, "steps must be listed in increasing order");
            current_step = s;
            c.steps.resize(s + 1);
            section = Section::Step;
        } else if (key == "SET") {
            // SET id kind [boundary] @ i j t
            need(7);
            SetDecl set;
            set.id = to_int(tok[1], line_no, "set id");
            set.kind = to_kind(tok[2], line_no);
            std::size_t at = 3;
            if (tok[3] != "@") {
                set.boundary = to_int(tok[3], line_no, "boundary id");
                at = 4;
            }
            if (tok.size() != at + 4 || tok[at] != "@") throw ParseError(line_no, "expected '@ i j t' after SET");
            set.coord = {to_int(tok[at + 1], line_no, "i"), to_int(tok[at + 2], line_no, "j"),
                         to_int(tok[at + 3], line_no, "t")};
            c.sets.push_back(std::move(set));
            set_lines.push_back(line_no);
            section = Section::Set;
        } else if (key == "OBSERVABLE") {
            need(2);
            c.observables.push_back({to_kind(tok[1], line_no), {}});
            observable_lines.push_back(line_no);
            section = Section::Observable;
        } else if (key == "CUT") {
            // CUT kind i j B boundary | CUT kind i j other_i other_j
            need(6);
            CutLink link;
            link.kind = to_kind(tok[1], line_no);
            link.i = to_int(tok[2], line_no, "i");
            link.j = to_int(tok[3], line_no, "j");
            if (tok[4] == "B") {
                link.boundary = to_int(tok[5], line_no, "boundary id");
            } else {
                link.other_i = to_int(tok[4], line_no, "i");
                link.other_j = to_int(tok[5], line_no, "j");
            }
            c.logical_cut.push_back(link);
        } else if (section == Section::Qubits) {
            need(4);
            QubitSite s;
            s.id = to_int(tok[0], line_no, "qubit id");
            s.i = to_int(tok[1], line_no, "i");
            s.j = to_int(tok[2], line_no, "j");
            s.role = to_role(tok[3], line_no);
            if (tok.size() > 4) s.layer = to_int(tok[4], line_no, "layer");
            if (s.id != c.num_qubits()) throw ParseError(line_no, "qubit ids must be consecutive from 0");
            c.sites.push_back(s);
        } else if (section == Section::Step) {
            auto kind = parse_gate_name(key);
            if (!kind) throw ParseError(line_no, "unknown gate '" + std::string(key) + "'");
            GateEvent g;
            g.kind = *kind;
            const std::size_t args = g.arity() + (g.kind == GateKind::Dead ? 1 : 0);
            if (tok.size() != args + 1) {
                throw ParseError(line_no, std::string(key) + " expects " + std::to_string(args) + " argument(s)");
            }
            for (int k = 0; k < g.arity(); ++k) {
                int q = to_int(tok[1 + k], line_no, "qubit");
                if (q < 0 || q >= c.num_qubits()) {
                    throw ParseError(line_no, "gate on undeclared qubit " + std::to_string(q));
                }
                g.qubits[k] = q;
            }
            if (g.kind == GateKind::Dead) g.duration = to_int(tok[2], line_no, "duration");
            c.steps[current_step].push_back(g);
        } else if (section == Section::Set) {
            auto refs = parse_refs(tok, 0, line_no);
            auto &dst = c.sets.back().refs;
            dst.insert(dst.end(), refs.begin(), refs.end());
        } else if (section == Section::Observable) {
            auto refs = parse_refs(tok, 0, line_no);
            auto &dst = c.observables.back().refs;
            dst.insert(dst.end(), refs.begin(), refs.end());
        } else {
            throw ParseError(line_no, "unexpected line starting with '" + std::string(key) + "'");
        }
        if (end == text.size()) break;
    }
    if (!seen_header) throw ParseError(line_no, "empty circuit file");

    CircuitIndex index(c);
    for (std::size_t k = 0; k < c.sets.size(); ++k) {
        for (const auto &ref : c.sets[k].refs) {
            if (!index.find(ref)) {
                throw ParseError(set_lines[k], "set " + std::to_string(c.sets[k].id) + " references missing measurement (" +
                                                   std::to_string(ref.qubit) + ", " + std::to_string(ref.round) + ")");
            }
        }
    }
    for (std::size_t k = 0; k < c.observables.size(); ++k) {
        for (const auto &ref : c.observables[k].refs) {
            if (!index.find(ref)) {
                throw ParseError(observable_lines[k], "observable references missing measurement (" +
                                                          std::to_string(ref.qubit) + ", " + std::to_string(ref.round) + ")");
            }
        }
    }
    return c;
}

std::string format_circuit(const Circuit &c) {
    std::ostringstream out;
    out << "CIRCUIT " << (c.name.empty() ? "unnamed" : c.name) << "\n";
    out << "DISTANCE " << c.distance << "\n";
    out << "ROUNDS " << c.rounds << "\n";
    out << "PERIOD " << c.period << "\n";
    out << "SPACING " << c.spacing.i << " " << c.spacing.j << " " << c.spacing.t << "\n";
    out << "QUBITS\n";
    for (const auto &s : c.sites) {
        out << s.id << " " << s.i << " " << s.j << " " << role_name(s.role);
        if (s.layer != 0) out << " " << s.layer;
        out << "\n";
    }
    for (const auto &b : c.boundaries) {
        out << "BOUNDARY " << b.id << " " << kind_name(b.kind) << " " << (b.nature == BoundaryNature::Spatial ? "spatial" : "temporal")
            << " " << b.name << "\n";
    }
    for (std::size_t s = 0; s < c.steps.size(); ++s) {
        out << "STEP " << s << "\n";
        for (const auto &g : c.steps[s]) {
            out << gate_name(g.kind);
            for (int q : g.targets()) out << " " << q;
            if (g.kind == GateKind::Dead) out << " " << g.duration;
            out << "\n";
        }
    }
    for (const auto &set : c.sets) {
        out << "SET " << set.id << " " << kind_name(set.kind);
        if (set.boundary) out << " " << *set.boundary;
        out << " @ " << set.coord.i << " " << set.coord.j << " " << set.coord.t << "\n";
        for (const auto &r : set.refs) out << "(" << r.qubit << ", " << r.round << ") ";
        out << "\n";
    }
    for (const auto &obs : c.observables) {
        out << "OBSERVABLE " << kind_name(obs.kind) << "\n";
        for (const auto &r : obs.refs) out << "(" << r.qubit << ", " << r.round << ") ";
        out << "\n";
    }
    for (const auto &link : c.logical_cut) {
        out << "CUT " << kind_name(link.kind) << " " << link.i << " " << link.j << " ";
        if (link.boundary >= 0) {
            out << "B " << link.boundary << "\n";
        } else {
            out << link.other_i << " " << link.other_j << "\n";
        }
    }
    return out.str();
}

}  // namespace tqec
