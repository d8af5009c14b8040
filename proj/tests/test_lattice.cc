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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "support/lattice_compare.h"
#include "tqec/analysis.h"
#include "tqec/decoder.h"
#include "tqec/lattice.h"

namespace tqec {
namespace {

TEST(LineWeight, NegativeLogOfProbability) {
    EXPECT_NEAR(line_weight(0.26), 1.3471, 5e-5);
    EXPECT_DOUBLE_EQ(line_weight(std::exp(-2.0)), 2.0);
}

TEST(LineWeight, ClampsAtBothEnds) {
    EXPECT_DOUBLE_EQ(line_weight(1.0), -std::log(kMaxStickProbability));
    EXPECT_DOUBLE_EQ(line_weight(0.0), -std::log(kMinStickProbability));
    EXPECT_GE(line_weight(1.0), 0.0);
}

TEST(LineWeight, StrictlyDecreasingInsideClampRange) {
    double last = line_weight(1e-14);
    for (double p = 2e-14; p < 0.99; p *= 1.7) {
        const double w = line_weight(p);
        EXPECT_LT(w, last);
        last = w;
    }
}

TEST(NestToLattice, OneDotPerBallOneLinePerStick) {
    AnalysisResult a = analyze(build_surface_code(3, {3, Basis::Z}), ModelLibrary::depolarizing(), 1e-3);
    Lattice lat = nest_to_lattice(a.nest);
    EXPECT_EQ(lat.lines.size(), a.nest.num_sticks());
    int present = 0;
    for (const Dot &d : lat.dots) present += d.present;
    EXPECT_EQ(present, static_cast<int>(a.nest.balls().size()));
    for (const Line &l : lat.lines) EXPECT_DOUBLE_EQ(l.weight, line_weight(l.p));
    EXPECT_EQ(lat.num_layers(), 4);
}

Coord3 lattice_units(const Coord3 &c, const Coord3 &spacing) { return {c.i / spacing.i, c.j / spacing.j, c.t / spacing.t}; }

TEST(Manhattan, ShortestPathIsTaxicabMetric) {
    Circuit c = build_surface_code(5, {6, Basis::Z});
    Lattice lat = build_manhattan(c);
    MatchingDecoder dec(lat, Kind::Primal);
    std::vector<int> primal;
    for (const Dot &d : lat.dots) {
        if (d.present && d.kind == Kind::Primal) primal.push_back(d.id);
    }
    // D((0,0,0),(1,2,3)) = 6 from the corner dot.
    const Coord3 origin = lat.dots[primal.front()].coord;
    CircuitIndex index(c);
    auto target = index.find_set(Kind::Primal, {origin.i + c.spacing.i, origin.j + 2 * c.spacing.j, origin.t + 3});
    ASSERT_TRUE(target.has_value());
    EXPECT_DOUBLE_EQ(dec.shortest_paths(primal.front())[*target].weight, 6.0);

    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> pick(0, primal.size() - 1);
    for (int k = 0; k < 100; ++k) {
        const int a = primal[pick(rng)];
        const int b = primal[pick(rng)];
        const Coord3 x = lattice_units(lat.dots[a].coord, c.spacing);
        const Coord3 y = lattice_units(lat.dots[b].coord, c.spacing);
        const double expected = std::abs(x.i - y.i) + std::abs(x.j - y.j) + std::abs(x.t - y.t);
        EXPECT_DOUBLE_EQ(dec.shortest_paths(a)[b].weight, expected) << a << " " << b;
    }
}

TEST(Manhattan, UnitWeightsIncludingBoundaries) {
    for (const Lattice &lat : {build_manhattan("surface", 3, 4), build_manhattan("cluster", 3, 3)}) {
        int boundary = 0;
        for (const Line &l : lat.lines) {
            EXPECT_DOUBLE_EQ(l.weight, 1.0);
            boundary += l.to_boundary();
            if (!l.to_boundary()) {
                const Coord3 a = lat.dots[l.a].coord;
                const Coord3 b = lat.dots[l.b].coord;
                EXPECT_EQ((a.i != b.i) + (a.j != b.j) + (a.t != b.t), 1);
            }
        }
        EXPECT_GT(boundary, 0);
    }
}

TEST(Autotuned, BoundaryWeightsDifferFromBulk) {
    Circuit c = build_surface_code(5, {6, Basis::Z});
    Lattice lat = nest_to_lattice(analyze(c, ModelLibrary::depolarizing(), 1e-3).nest);
    // Spatial primal lines inside a bulk layer against the same layer's spatial boundary lines.
    std::set<long long> bulk, boundary;
    for (const Line &l : lat.lines) {
        if (l.kind != Kind::Primal || lat.dots[l.a].coord.t != 3) continue;
        const long long key = std::llround(l.weight * 1e6);
        if (l.to_boundary()) {
            if (l.boundary <= 1) boundary.insert(key);
        } else if (lat.dots[l.b].coord.t == 3) {
            bulk.insert(key);
        }
    }
    ASSERT_FALSE(boundary.empty());
    ASSERT_FALSE(bulk.empty());
    EXPECT_NE(boundary, bulk);
    bool some_unique = false;
    for (long long w : boundary) some_unique = some_unique || !bulk.count(w);
    EXPECT_TRUE(some_unique);
}

TEST(Autotuned, DoublingPShiftsWeightsByLogTwo) {
    Circuit c = build_surface_code(3, {4, Basis::Z});
    ModelLibrary lib = ModelLibrary::depolarizing();
    AnalysisResult lo = analyze(c, lib, 1e-5);
    AnalysisResult hi = analyze(c, lib, 2e-5);
    ASSERT_EQ(lo.nest.num_sticks(), hi.nest.num_sticks());
    const auto xs = lo.nest.sticks();
    const auto ys = hi.nest.sticks();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        ASSERT_EQ(xs[k]->a, ys[k]->a);
        ASSERT_EQ(xs[k]->b, ys[k]->b);
        ASSERT_EQ(xs[k]->boundary, ys[k]->boundary);
        EXPECT_NE(xs[k]->p_stick, ys[k]->p_stick);
        EXPECT_NEAR(line_weight(ys[k]->p_stick) - line_weight(xs[k]->p_stick), -std::log(2.0), 1e-3);
    }
    Recipe a = compile_recipe(nest_to_lattice(lo.nest));
    Recipe b = compile_recipe(nest_to_lattice(hi.nest));
    ASSERT_EQ(a.offsets.size(), b.offsets.size());
    for (std::size_t k = 0; k < a.offsets.size(); ++k) {
        EXPECT_EQ(std::tie(a.offsets[k].di, a.offsets[k].dj, a.offsets[k].dt, a.offsets[k].boundary),
                  std::tie(b.offsets[k].di, b.offsets[k].dj, b.offsets[k].dt, b.offsets[k].boundary));
    }
}

TEST(Autotuned, SingleContributorWeightsShiftExactly) {
    // Readout errors alone give one contributor per vertical stick.
    ModelLibrary lib;
    lib.set(GateKind::MeasZ, depolarizing_model(GateKind::MeasZ));
    lib.set(GateKind::MeasX, depolarizing_model(GateKind::MeasX));
    Circuit c = build_surface_code(3, {4, Basis::Z});
    AnalysisResult lo = analyze(c, lib, 1e-3);
    AnalysisResult hi = analyze(c, lib, 2e-3);
    ASSERT_EQ(lo.nest.num_sticks(), hi.nest.num_sticks());
    const auto xs = lo.nest.sticks();
    const auto ys = hi.nest.sticks();
    int singles = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k]->contributors.size() != 1) continue;
        ++singles;
        EXPECT_NEAR(line_weight(ys[k]->p_stick) - line_weight(xs[k]->p_stick), -std::log(2.0), 1e-12);
    }
    EXPECT_GT(singles, 0);
}

TEST(Export, LatticeDocument) {
    Lattice lat = build_manhattan("surface", 2, 2);
    std::ostringstream out;
    export_lattice(lat, out);
    auto doc = nlohmann::json::parse(out.str());
    EXPECT_EQ(doc["format"], "tqec-lattice");
    EXPECT_EQ(doc["version"], 1);
    EXPECT_EQ(doc["lines"].size(), lat.lines.size());
    for (const auto &l : doc["lines"]) {
        EXPECT_TRUE(l.contains("b") != l.contains("boundary"));
        EXPECT_DOUBLE_EQ(l["w"].get<double>(), 1.0);
    }
}

TEST(Recipe, SurfaceCodeConvergesQuickly) {
    Recipe r = bootup(build_surface_code(4, {8, Basis::Z}), ModelLibrary::depolarizing(), 1e-3, {true});
    EXPECT_EQ(r.status, RecipeStatus::Converged);
    EXPECT_EQ(r.source_layers, 9);
    EXPECT_LE(r.head.size(), 3u);
    EXPECT_LE(r.tail.size(), 3u);
    EXPECT_EQ(r.min_layers(), 5);
    // Golden counts for the d=4 depolarizing recipe.
    EXPECT_EQ(r.layers.size(), r.head.size() + r.tail.size() + 1);
    EXPECT_EQ(r.offsets.size(), 54u);
    EXPECT_EQ(r.blocks.size(), 54u);
}

TEST(Recipe, BootLayerDiffersFromBulk) {
    for (const char *code : {"surface", "cluster"}) {
        Recipe r = bootup(build_code(code, 3, 8), ModelLibrary::depolarizing(), 1e-3);
        ASSERT_EQ(r.status, RecipeStatus::Converged) << code;
        ASSERT_FALSE(r.head.empty());
        EXPECT_NE(r.head.front(), r.bulk);
        const int total = 12;
        for (int t = static_cast<int>(r.head.size()); t < total - static_cast<int>(r.tail.size()); ++t) {
            EXPECT_EQ(r.layer_at(t, total), r.bulk);
        }
    }
}

TEST(Recipe, ShortCircuitIsFinite) {
    Circuit c = build_surface_code(3, {3, Basis::Z});
    Recipe r = bootup(c, ModelLibrary::depolarizing(), 1e-3);
    EXPECT_EQ(r.status, RecipeStatus::Finite);
    EXPECT_EQ(r.head.size(), 4u);
    EXPECT_THROW(r.layer_at(4, 4), std::out_of_range);
    EXPECT_THROW(r.layer_at(0, 6), std::out_of_range);
    EXPECT_THROW(bootup(c, ModelLibrary::depolarizing(), 1e-3, {true}), std::runtime_error);
    auto diff = testing::compare_lattices(generate_lattice(r, c), nest_to_lattice(analyze(c, ModelLibrary::depolarizing(), 1e-3).nest));
    EXPECT_TRUE(diff.same_structure) << diff.first_difference;
}

TEST(Recipe, ConvergedRecipeRejectsTooShortTargets) {
    Recipe r = bootup(build_surface_code(3, {8, Basis::Z}), ModelLibrary::depolarizing(), 1e-3);
    EXPECT_THROW(generate_lattice(r, build_surface_code(3, {2, Basis::Z})), std::out_of_range);
}

TEST(Recipe, GeneratedMatchesDirect) {
    ModelLibrary lib = ModelLibrary::depolarizing();
    for (const char *code : {"surface", "cluster"}) {
        Recipe r = bootup(build_code(code, 3, 8), lib, 1e-3);
        for (int rounds : {4, 9, 15}) {
            Circuit c = build_code(code, 3, rounds);
            Lattice direct = nest_to_lattice(analyze(c, lib, 1e-3).nest);
            auto diff = testing::compare_lattices(generate_lattice(r, c), direct);
            EXPECT_TRUE(diff.same_structure) << code << " rounds " << rounds << " " << diff.first_difference;
            EXPECT_LE(diff.max_relative, 1e-12) << code << " rounds " << rounds;
        }
    }
}

TEST(Recipe, AutotunedLatticeForLongCircuits) {
    ModelLibrary lib = ModelLibrary::asymmetric();
    Circuit c = build_surface_code(3, {20, Basis::X});
    auto diff = testing::compare_lattices(autotuned_lattice(c, lib, 2e-3), nest_to_lattice(analyze(c, lib, 2e-3).nest));
    EXPECT_TRUE(diff.same_structure) << diff.first_difference;
    EXPECT_LE(diff.max_relative, 1e-12);
}

}  // namespace
}  // namespace tqec
