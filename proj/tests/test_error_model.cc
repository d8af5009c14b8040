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
#include <fstream>
#include <map>

#include "tqec/error_model.h"

namespace tqec {
namespace {

constexpr const char *kCnotFile =
    "2\n"
    "1.0\n"
    "6\n"
    "81 0 3\n"
    "14 1 0\n"
    "13 2 1\n"
    "28 2 2\n"
    "78 3 0\n"
    "30 3 2\n"
    "1\n";

double round3(double v) { return std::round(v * 1000) / 1000; }

TEST(ErrorModelParse, WorkedCnotFile) {
    ErrorModel m = parse_error_model(kCnotFile);
    EXPECT_EQ(m.num_qubits, 2);
    EXPECT_DOUBLE_EQ(m.x, 1.0);
    ASSERT_EQ(m.entries.size(), 6u);
    EXPECT_EQ(m.duration, 1);
    double total = 0;
    for (const auto &e : m.entries) total += e.strength;
    EXPECT_DOUBLE_EQ(total, 244);
    EXPECT_EQ(m.entries[0].codes, (std::vector<ErrorCode>{kI, kY}));
    EXPECT_EQ(m.entries[5].codes, (std::vector<ErrorCode>{kY, kZ}));
}

TEST(ErrorModelParse, WorkedCnotNormalization) {
    NormalizedErrorModel n = normalize(parse_error_model(kCnotFile));
    const std::vector<double> expected = {0.332, 0.057, 0.053, 0.115, 0.320, 0.123};
    ASSERT_EQ(n.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_DOUBLE_EQ(round3(n.q[k]), expected[k]) << k;
    EXPECT_DOUBLE_EQ(n.q[0], 81.0 / 244.0);
    EXPECT_DOUBLE_EQ(n.cumulative.back(), 1.0);
}

TEST(ErrorModelParse, SingleEntryXOnly) {
    ErrorModel m = parse_error_model("1\n1.0\n1\n1 1\n1\n");
    NormalizedErrorModel n = normalize(m);
    ASSERT_EQ(n.size(), 1u);
    EXPECT_DOUBLE_EQ(n.q[0], 1.0);
    EXPECT_EQ(n.codes[0][0], kX);
}

TEST(ErrorModelParse, NormalizationScalesByX) {
    NormalizedErrorModel n = normalize(parse_error_model("1\n0.1\n2\n1 1\n1 2\n1\n"));
    EXPECT_DOUBLE_EQ(n.q[0], 0.05);
    EXPECT_DOUBLE_EQ(n.q[1], 0.05);
}

TEST(ErrorModelParse, CommentsAndBlankLinesIgnored) {
    ErrorModel m = parse_error_model("# header\n1\n\n1.0 # x\n1\n1 2\n1\n");
    ASSERT_EQ(m.entries.size(), 1u);
    EXPECT_EQ(m.entries[0].codes[0], kZ);
}

TEST(ErrorModelParse, RejectsEntryCountMismatch) {
    EXPECT_THROW(parse_error_model("1\n1.0\n5\n1 1\n1 2\n1 3\n1 1\n1 2\n1 3\n1\n"), ParseError);
    EXPECT_THROW(parse_error_model("1\n1.0\n3\n1 1\n1\n"), ParseError);
}

TEST(ErrorModelParse, RejectsMalformedInput) {
    EXPECT_THROW(parse_error_model(""), ParseError);
    EXPECT_THROW(parse_error_model("1\n1.0\n"), ParseError);
    EXPECT_THROW(parse_error_model("2\n1.0\n1\n1 1\n1\n"), ParseError);
    EXPECT_THROW(parse_error_model("1\n1.0\n1\n-1 1\n1\n"), ParseError);
    EXPECT_THROW(parse_error_model("2\n1.0\n1\n1 0 0\n1\n"), ParseError);
    EXPECT_THROW(parse_error_model("3\n1.0\n1\n1 1 1 1\n1\n"), ParseError);
    EXPECT_THROW(parse_error_model("1\nabc\n1\n1 1\n1\n"), ParseError);
}

TEST(ErrorModelParse, ParseErrorCarriesLine) {
    try {
        parse_error_model("1\n1.0\n1\n-1 1\n1\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 4);
    }
}

TEST(ErrorModelParse, FormatRoundTrips) {
    for (GateKind k : {GateKind::InitZ, GateKind::MeasX, GateKind::H, GateKind::CNOT, GateKind::Identity}) {
        ErrorModel m = asymmetric_model(k);
        EXPECT_EQ(parse_error_model(format_error_model(m)), m);
    }
    ErrorModel w = parse_error_model(kCnotFile);
    EXPECT_EQ(parse_error_model(format_error_model(w)), w);
}

TEST(ErrorModelSample, ZeroProbabilityNeverSamples) {
    NormalizedErrorModel n = normalize(depolarizing_model(GateKind::CNOT));
    Rng rng(3);
    for (int k = 0; k < 10000; ++k) EXPECT_FALSE(sample_error(n, 0.0, rng).has_value());
}

TEST(ErrorModelSample, CertainFailureAlwaysReturnsTheSingleEntry) {
    NormalizedErrorModel n = normalize(parse_error_model("1\n1.0\n1\n1 1\n1\n"));
    Rng rng(4);
    for (int k = 0; k < 1000; ++k) {
        auto e = sample_error(n, 1.0, rng);
        ASSERT_TRUE(e.has_value());
        EXPECT_EQ(*e, 0u);
    }
}

TEST(ErrorModelSample, RejectsProbabilityAboveOne) {
    NormalizedErrorModel n = normalize(asymmetric_model(GateKind::MeasZ));
    Rng rng(5);
    EXPECT_THROW(sample_error(n, 0.2, rng), std::invalid_argument);
    EXPECT_NO_THROW(sample_error(n, 0.1, rng));
}

TEST(ErrorModelSample, EntryFrequencyMatchesWorkedModel) {
    NormalizedErrorModel n = normalize(parse_error_model(kCnotFile));
    Rng rng(11);
    const long trials = 2'000'000;
    long hits = 0;
    for (long k = 0; k < trials; ++k) {
        auto e = sample_error(n, 0.01, rng);
        if (e && *e == 0) ++hits;
    }
    const double f = static_cast<double>(hits) / trials;
    const double expected = 0.01 * 81.0 / 244.0;
    const double sigma = std::sqrt(expected * (1 - expected) / trials);
    EXPECT_NEAR(f, expected, 5 * sigma);
}

TEST(ErrorModelSample, ChiSquareAgainstStrengths) {
    NormalizedErrorModel n = normalize(parse_error_model(kCnotFile));
    Rng rng(12);
    const long trials = 200'000;
    std::vector<long> counts(n.size(), 0);
    for (long k = 0; k < trials; ++k) ++counts[*sample_error(n, 1.0, rng)];
    double chi2 = 0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const double e = trials * n.q[k];
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    // 5 degrees of freedom, p = 0.001 critical value.
    EXPECT_LT(chi2, 20.52);
}

TEST(ModelLibrary, BuiltinsCoverNoisyGates) {
    for (const auto &lib : {ModelLibrary::depolarizing(), ModelLibrary::asymmetric()}) {
        for (GateKind k : {GateKind::InitZ, GateKind::InitX, GateKind::MeasZ, GateKind::MeasX, GateKind::H,
                           GateKind::CNOT, GateKind::CPhase, GateKind::Identity}) {
            EXPECT_NE(lib.find(k), nullptr) << gate_name(k);
        }
        EXPECT_EQ(lib.find(GateKind::Dead), nullptr);
    }
}

TEST(ModelLibrary, DepolarizingCnotIsUniformOverFifteenPaulis) {
    ModelLibrary lib = ModelLibrary::depolarizing();
    const NormalizedErrorModel *n = lib.find(GateKind::CNOT);
    ASSERT_EQ(n->size(), 15u);
    for (double q : n->q) EXPECT_DOUBLE_EQ(q, 1.0 / 15);
}

TEST(ModelLibrary, AsymmetricScalesMeasurementIdleAndZType) {
    ModelLibrary a = ModelLibrary::asymmetric();
    EXPECT_DOUBLE_EQ(a.find(GateKind::MeasZ)->x, 10.0);
    EXPECT_DOUBLE_EQ(a.find(GateKind::Identity)->x, 0.1);
    const ErrorModel *cnot = a.raw(GateKind::CNOT);
    for (const auto &e : cnot->entries) {
        bool only_x = e.codes[0] <= kX && e.codes[1] <= kX;
        EXPECT_DOUBLE_EQ(e.strength, only_x ? 1.0 : 100.0);
    }
}

TEST(ModelLibrary, ShippedDirectoriesMatchBuiltins) {
    const std::filesystem::path root = TQEC_MODELS_DIR;
    for (const char *name : {"depolarizing", "asymmetric"}) {
        ModelLibrary loaded = ModelLibrary::load_directory(root / name);
        ModelLibrary builtin = ModelLibrary::named(name);
        for (int k = 0; k < kNumGateKinds; ++k) {
            auto kind = static_cast<GateKind>(k);
            const ErrorModel *a = loaded.raw(kind);
            const ErrorModel *b = builtin.raw(kind);
            ASSERT_EQ(a == nullptr, b == nullptr) << name << " " << gate_name(kind);
            if (a) EXPECT_EQ(*a, *b) << name << " " << gate_name(kind);
        }
    }
}

TEST(ModelLibrary, LoadDirectoryRejectsWrongArity) {
    auto dir = std::filesystem::temp_directory_path() / "tqec_bad_models";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "gates.toml") << "CNOT = \"one.txt\"\n";
        std::ofstream(dir / "one.txt") << "1\n1.0\n1\n1 1\n1\n";
    }
    EXPECT_ANY_THROW(ModelLibrary::load_directory(dir));
    std::filesystem::remove_all(dir);
}

TEST(ModelLibrary, CompositionDefaults) {
    ModelLibrary lib = ModelLibrary::depolarizing();
    EXPECT_EQ(lib.table().compose(kX, kZ), kY);
    EXPECT_EQ(lib.table().compose(kZ, kZ), kI);
    EXPECT_EQ(lib.table().compose(kLeak, kX), kLeak);
}

}  // namespace
}  // namespace tqec
