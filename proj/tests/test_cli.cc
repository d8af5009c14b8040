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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tqec/circuit.h"

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result tqec_cli(const std::string &args) {
    const std::string command = std::string(TQEC_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE *pipe = popen(command.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("tqec_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

TEST(Cli, SimulateWritesCsv) {
    const Result r = tqec_cli("simulate --code surface --d 3 --lattice autotuned -p 0.01,0.02 --max-failures 10 "
                              "--seed 3 --rounds-per-block 3");
    ASSERT_EQ(r.status, 0);
    std::istringstream lines(r.out);
    std::string header, row;
    std::getline(lines, header);
    EXPECT_EQ(header, "code,d,lattice,p,rounds,failures_X,failures_Z,rate,ci_lo,ci_hi,seconds");
    int rows = 0;
    while (std::getline(lines, row)) {
        EXPECT_EQ(row.rfind("surface,3,autotuned,", 0), 0u) << row;
        EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
        ++rows;
    }
    EXPECT_EQ(rows, 2);
}

TEST(Cli, SimulateToFileIsDeterministic) {
    const auto a = temp_path("a.csv");
    const auto b = temp_path("b.csv");
    const std::string args = "simulate --code cluster --d 3 --lattice manhattan -p 0.01 --max-failures 5 "
                             "--rounds-per-block 3 --seed 9 --out ";
    ASSERT_EQ(tqec_cli(args + a.string()).status, 0);
    ASSERT_EQ(tqec_cli(args + b.string()).status, 0);
    auto strip_seconds = [](std::string s) { return s.substr(0, s.rfind(',')); };
    EXPECT_EQ(strip_seconds(slurp(a)), strip_seconds(slurp(b)));
    EXPECT_NE(slurp(a).find("cluster,3,manhattan,0.01,"), std::string::npos);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, AnalyzeExportsNestAndLattice) {
    const auto nest = temp_path("nest.json");
    const auto lattice = temp_path("lattice.json");
    const Result r = tqec_cli("analyze --code surface --d 3 --models " + std::string(TQEC_MODELS_DIR) +
                              "/depolarizing -p 0.01 --rounds 3 --out " + nest.string());
    ASSERT_EQ(r.status, 0);
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_EQ(summary["qubits"], 25);
    EXPECT_EQ(summary["undetectable_logicals"], 0);
    EXPECT_GT(summary["sticks"].get<int>(), 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(nest))["format"], "tqec-nest");

    ASSERT_EQ(tqec_cli("analyze --d 3 -p 0.01 --rounds 3 --out " + lattice.string()).status, 0);
    const auto doc = nlohmann::json::parse(slurp(lattice));
    EXPECT_EQ(doc["format"], "tqec-lattice");
    EXPECT_EQ(doc["lines"].size(), summary["sticks"].get<std::size_t>());
    std::filesystem::remove(nest);
    std::filesystem::remove(lattice);
}

TEST(Cli, AnalyzeCircuitFile) {
    const auto file = temp_path("circuit.txt");
    {
        std::ofstream out(file);
        out << tqec::format_circuit(tqec::build_surface_code(2, {2}));
    }
    const Result r = tqec_cli("analyze --circuit " + file.string() + " -p 0.01");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["qubits"], 9);
    std::filesystem::remove(file);
}

TEST(Cli, StructuralViolationExitsNonzero) {
    tqec::Circuit c = tqec::build_surface_code(3);
    // qubits 0 and 24 sit in opposite corners.
    [&] {
        for (auto &step : c.steps) {
            for (auto &g : step) {
                if (g.kind == tqec::GateKind::CNOT) {
                    g.qubits = {0, 24};
                    return;
                }
            }
        }
    }();
    const auto file = temp_path("bad.txt");
    {
        std::ofstream out(file);
        out << tqec::format_circuit(c);
    }
    EXPECT_EQ(tqec_cli("analyze --circuit " + file.string()).status, 3);
    std::filesystem::remove(file);
}

TEST(Cli, BadInputExitsNonzero) {
    EXPECT_NE(tqec_cli("simulate --d 3 -p 0.01 --rounds-per-block 2").status, 0);
    EXPECT_NE(tqec_cli("simulate --d 3 -p abc").status, 0);
    EXPECT_NE(tqec_cli("simulate --d 3 -p 0.01 --lattice hexagonal").status, 0);
    EXPECT_NE(tqec_cli("analyze --models /nonexistent").status, 0);
    EXPECT_NE(tqec_cli("analyze --circuit /nonexistent/file").status, 0);
    EXPECT_NE(tqec_cli("inject --k 3").status, 0);
    EXPECT_NE(tqec_cli("").status, 0);
    EXPECT_NE(tqec_cli("frobnicate").status, 0);
}

TEST(Cli, InjectReportsFailures) {
    const Result good = tqec_cli("inject --k 1 --d 3");
    ASSERT_EQ(good.status, 0);
    EXPECT_EQ(nlohmann::json::parse(good.out)["failing_combinations"], 0);
    const Result bad = tqec_cli("inject --k 1 --d 3 --lattice manhattan");
    ASSERT_EQ(bad.status, 0);
    const auto doc = nlohmann::json::parse(bad.out);
    EXPECT_GT(doc["failing_combinations"].get<long>(), 0);
    EXPECT_FALSE(doc["examples"].empty());
    EXPECT_NE(tqec_cli("inject --k 2 --d 3 --max-combinations 10").status, 0);
}

TEST(Cli, RecipeDump) {
    const Result summary = tqec_cli("recipe --d 4 --rounds 8");
    ASSERT_EQ(summary.status, 0);
    const auto s = nlohmann::json::parse(summary.out);
    EXPECT_EQ(s["status"], "converged");
    EXPECT_EQ(s["min_layers"], 5);
    const Result dump = tqec_cli("recipe --dump --d 4 --rounds 8");
    ASSERT_EQ(dump.status, 0);
    const auto doc = nlohmann::json::parse(dump.out);
    EXPECT_EQ(doc["format"], "tqec-recipe");
    EXPECT_EQ(doc["offsets"].size(), s["offsets"].get<std::size_t>());
    EXPECT_EQ(doc["layers"].size(), s["layers"].get<std::size_t>());
    EXPECT_GE(doc["bulk"].get<int>(), 0);
}

}  // namespace
