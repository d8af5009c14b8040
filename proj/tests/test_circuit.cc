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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "support/tableau.h"
#include "tqec/circuit.h"

namespace tqec {
namespace {

int count_role(const Circuit &c, SiteRole role) {
    return static_cast<int>(std::count_if(c.sites.begin(), c.sites.end(), [&](const QubitSite &s) { return s.role == role; }));
}

TEST(SurfaceCode, DistanceThreeLayout) {
    Circuit c = build_surface_code(3);
    EXPECT_EQ(c.num_qubits(), 25);
    EXPECT_EQ(count_role(c, SiteRole::Data), 13);
    EXPECT_EQ(count_role(c, SiteRole::SyndromeX) + count_role(c, SiteRole::SyndromeZ), 12);
    EXPECT_EQ(count_role(c, SiteRole::SyndromeX), 6);
    EXPECT_EQ(c.rounds, 3);
}

TEST(SurfaceCode, DistanceTwoFollowsGrid) {
    Circuit c = build_surface_code(2);
    EXPECT_EQ(c.num_qubits(), 9);
    EXPECT_EQ(count_role(c, SiteRole::Data), 5);
}

TEST(SurfaceCode, RejectsInvalidArguments) {
    EXPECT_THROW(build_surface_code(1), std::invalid_argument);
    EXPECT_THROW(build_surface_code(3, {1, Basis::Z}), std::invalid_argument);
    EXPECT_THROW(build_cluster_state(1), std::invalid_argument);
    EXPECT_THROW(build_code("toric", 3, 3), std::invalid_argument);
}

TEST(Validate, GeneratedCircuitsAreClean) {
    for (int d = 2; d <= 5; ++d) {
        for (Basis b : {Basis::Z, Basis::X}) {
            ValidationReport r = validate(build_surface_code(d, {d + 1, b}));
            EXPECT_TRUE(r.ok()) << "surface d=" << d << "\n" << r.summary();
        }
        ValidationReport r = validate(build_cluster_state(d, d));
        EXPECT_TRUE(r.ok()) << "cluster d=" << d << "\n" << r.summary();
    }
}

TEST(Validate, FlagsMeasurementInThreeSets) {
    Circuit c = build_surface_code(3);
    CircuitIndex index(c);
    const SetDecl &a = c.sets[0];
    const MeasRef ref = a.refs[0];
    // add the reference to two sets that did not have it.
    int added = 0;
    for (auto &s : c.sets) {
        if (added == 2) break;
        if (std::find(s.refs.begin(), s.refs.end(), ref) == s.refs.end()) {
            s.refs.push_back(ref);
            ++added;
        }
    }
    ValidationReport r = validate(c);
    EXPECT_TRUE(r.has("meas-coverage")) << r.summary();
}

TEST(Validate, FlagsNonNearestNeighbourGate) {
    Circuit c = build_surface_code(3);
    // qubits 0 and 24 sit in opposite corners.
    for (auto &step : c.steps) {
        for (auto &g : step) {
            if (g.kind == GateKind::CNOT) {
                g.qubits = {0, 24};
                ValidationReport r = validate(c);
                EXPECT_TRUE(r.has("non-local")) << r.summary();
                return;
            }
        }
    }
    FAIL() << "no CNOT found";
}

TEST(Validate, FlagsUnknownQubitAndBoundary) {
    Circuit c = build_surface_code(2);
    c.steps[0].push_back(GateEvent{GateKind::H, {99, -1}, 1});
    EXPECT_TRUE(validate(c).has("gate-qubit"));
    Circuit d = build_surface_code(2);
    d.sets[0].boundary = 42;
    EXPECT_TRUE(validate(d).has("set-boundary"));
}

TEST(Validate, EveryMeasurementInTwoSetsOrOnePlusBoundary) {
    for (const Circuit &c : {build_surface_code(3, {4, Basis::Z}), build_surface_code(4, {3, Basis::X}), build_cluster_state(3, 3)}) {
        CircuitIndex index(c);
        for (int m = 0; m < index.num_measurements(); ++m) {
            auto sets = index.sets_of(m);
            if (sets.size() == 2) continue;
            ASSERT_EQ(sets.size(), 1u) << c.name << " measurement " << m;
            EXPECT_TRUE(c.sets[sets[0]].boundary.has_value()) << c.name << " measurement " << m;
        }
    }
}

TEST(Parse, RoundTripsGeneratedCircuits) {
    for (const Circuit &c : {build_surface_code(3), build_surface_code(2, {4, Basis::X}), build_cluster_state(2, 2)}) {
        Circuit back = parse_circuit(format_circuit(c));
        EXPECT_EQ(back, c) << c.name;
    }
}

TEST(Parse, RejectsUndeclaredQubit) {
    const std::string text =
        "CIRCUIT tiny\nQUBITS\n0 0 0 data\nSTEP 0\nINITZ 0\nSTEP 1\nCNOT 0 1\n";
    EXPECT_THROW(parse_circuit(text), ParseError);
}

TEST(Parse, RejectsEmptyFile) {
    EXPECT_THROW(parse_circuit(""), ParseError);
    EXPECT_THROW(parse_circuit("# only a comment\n\n"), ParseError);
}

TEST(Parse, RejectsDanglingSetReference) {
    Circuit c = build_surface_code(2);
    std::string text = format_circuit(c);
    text += "SET 999 primal 4 @ 0 0 0\n(0, 77)\n";
    try {
        parse_circuit(text);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_GT(e.line(), 1);
    }
}

TEST(Parse, RejectsUnknownGate) {
    EXPECT_THROW(parse_circuit("CIRCUIT x\nQUBITS\n0 0 0 data\nSTEP 0\nTOFFOLI 0\n"), ParseError);
}

std::vector<std::uint8_t> parities(const CircuitIndex &index, const std::vector<std::uint8_t> &outcomes, bool sets) {
    const int n = sets ? index.num_sets() : index.num_observables();
    std::vector<std::uint8_t> out(n, 0);
    for (int k = 0; k < n; ++k) {
        for (int m : sets ? index.set_measurements(k) : index.observable_measurements(k)) out[k] ^= outcomes[m];
    }
    return out;
}

TEST(Noiseless, EverySetProductIsPlusOne) {
    for (int d = 2; d <= 5; ++d) {
        std::vector<Circuit> circuits = {build_surface_code(d, {10, Basis::Z}), build_surface_code(d, {10, Basis::X}),
                                         build_cluster_state(d, 10)};
        for (const Circuit &c : circuits) {
            CircuitIndex index(c);
            for (std::uint64_t seed : {1u, 2u}) {
                auto outcomes = testing::run_noiseless(c, index, seed);
                auto sets = parities(index, outcomes, true);
                for (int s = 0; s < index.num_sets(); ++s) ASSERT_EQ(sets[s], 0) << c.name << " d=" << d << " set " << s;
                auto obs = parities(index, outcomes, false);
                for (auto o : obs) ASSERT_EQ(o, 0) << c.name << " d=" << d;
            }
        }
    }
}

TEST(Noiseless, ObservableIsRandomizedStateIndependent) {
    // Two seeds give different raw outcomes but identical set products.
    Circuit c = build_surface_code(3, {3, Basis::Z});
    CircuitIndex index(c);
    EXPECT_NE(testing::run_noiseless(c, index, 1), testing::run_noiseless(c, index, 99));
}

TEST(ClusterState, BulkSetsHaveSixMeasurements) {
    Circuit c = build_cluster_state(4, 4);
    std::array<Coord3, 2> lo, hi;
    lo.fill({1 << 20, 1 << 20, 1 << 20});
    hi.fill({-1, -1, -1});
    for (const auto &s : c.sets) {
        auto k = static_cast<int>(s.kind);
        lo[k] = {std::min(lo[k].i, s.coord.i), std::min(lo[k].j, s.coord.j), std::min(lo[k].t, s.coord.t)};
        hi[k] = {std::max(hi[k].i, s.coord.i), std::max(hi[k].j, s.coord.j), std::max(hi[k].t, s.coord.t)};
    }
    int bulk = 0;
    for (const auto &s : c.sets) {
        EXPECT_LE(s.refs.size(), 6u);
        auto k = static_cast<int>(s.kind);
        bool interior = s.coord.i > lo[k].i && s.coord.i < hi[k].i && s.coord.j > lo[k].j && s.coord.j < hi[k].j &&
                        s.coord.t > lo[k].t && s.coord.t < hi[k].t;
        if (!interior) continue;
        EXPECT_EQ(s.refs.size(), 6u) << "set " << s.id;
        ++bulk;
    }
    EXPECT_GT(bulk, 0);
}

TEST(ClusterState, QubitLifetimeIsInitThenHThenMeasZ) {
    Circuit c = build_cluster_state(3, 2);
    std::vector<std::vector<GateKind>> life(c.num_qubits());
    for (const auto &step : c.steps) {
        for (const auto &g : step) {
            if (g.kind == GateKind::Identity) continue;
            for (int q : g.targets()) life[q].push_back(g.kind);
        }
    }
    int cycles = 0;
    for (int q = 0; q < c.num_qubits(); ++q) {
        const auto &l = life[q];
        std::size_t k = 0;
        while (k < l.size()) {
            ASSERT_EQ(l[k], GateKind::InitZ) << q;
            std::size_t e = k + 1;
            while (e < l.size() && l[e] != GateKind::MeasZ) ++e;
            ASSERT_LT(e, l.size()) << q;
            ASSERT_GE(e - k, 3u);
            EXPECT_EQ(l[k + 1], GateKind::H) << q;
            EXPECT_EQ(l[e - 1], GateKind::H) << q;
            for (std::size_t m = k + 2; m + 1 < e; ++m) EXPECT_EQ(l[m], GateKind::CPhase) << q;
            ++cycles;
            k = e + 1;
        }
    }
    EXPECT_GT(cycles, c.num_qubits());
}

TEST(ClusterState, OnlyPrimalObservable) {
    EXPECT_THROW(build_code("cluster", 3, 3, Basis::X), std::invalid_argument);
    Circuit c = build_cluster_state(3, 3);
    ASSERT_EQ(c.observables.size(), 1u);
    EXPECT_EQ(c.observables[0].kind, Kind::Primal);
}

TEST(Schedule, BulkRoundsRepeatWithPeriod) {
    for (const Circuit &c : {build_surface_code(3, {8, Basis::Z}), build_cluster_state(3, 8)}) {
        const int p = c.period;
        for (int s = 2 * p; s + p < 6 * p; ++s) {
            EXPECT_EQ(c.steps[s], c.steps[s + p]) << c.name << " step " << s;
        }
    }
}

TEST(Index, MeasurementLookup) {
    Circuit c = build_surface_code(3);
    CircuitIndex index(c);
    for (int m = 0; m < index.num_measurements(); ++m) {
        const Measurement &meas = index.measurement(m);
        EXPECT_EQ(index.at({meas.qubit, meas.round}), m);
        EXPECT_EQ(index.measurement_at(meas.step, meas.gate), m);
    }
    EXPECT_FALSE(index.find({0, 1000}).has_value());
    EXPECT_EQ(index.num_layers(), c.rounds + 1);
}

}  // namespace
}  // namespace tqec
