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

#include "tqec/error_model.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace tqec {

namespace {

std::vector<std::string> split_fields(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string f;
    while (in >> f) out.push_back(f);
    return out;
}

double to_number(const std::string &s, int line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != s.size()) throw ParseError(line, "expected a number, got '" + s + "'");
    return v;
}

int to_integer(const std::string &s, int line, const char *what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(line, std::string("expected integer ") + what + ", got '" + s + "'");
    }
    return v;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ErrorModel single_flip(ErrorCode code, double x) { return ErrorModel{1, x, {{1, {code}}}, 1}; }

ErrorModel one_qubit_depolarizing(double x) { return ErrorModel{1, x, {{1, {kX}}, {1, {kZ}}, {1, {kY}}}, 1}; }

ErrorModel two_qubit(double xz_weight) {
    ErrorModel m{2, 1.0, {}, 1};
    for (ErrorCode a = 0; a < 4; ++a) {
        for (ErrorCode b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            bool only_x = (a == kI || a == kX) && (b == kI || b == kX);
            m.entries.push_back({only_x ? 1.0 : xz_weight, {a, b}});
        }
    }
    return m;
}

}  // namespace

ErrorModel parse_error_model(std::string_view text) {
    std::vector<std::pair<int, std::vector<std::string>>> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        auto fields = split_fields(raw);
        if (!fields.empty()) lines.emplace_back(line_no, std::move(fields));
    }
    if (lines.size() < 3) throw ParseError(line_no, "error model needs qubit count, x and entry count");
    auto single = [&](std::size_t k, const char *what) -> const std::string & {
        if (lines[k].second.size() != 1) {
            throw ParseError(lines[k].first, std::string("expected a single ") + what);
        }
        return lines[k].second[0];
    };

    ErrorModel m;
    m.num_qubits = to_integer(single(0, "qubit count"), lines[0].first, "qubit count");
    if (m.num_qubits != 1 && m.num_qubits != 2) {
        throw ParseError(lines[0].first, "qubit count must be 1 or 2, got " + std::to_string(m.num_qubits));
    }
    m.x = to_number(single(1, "normalization"), lines[1].first);
    if (m.x < 0) throw ParseError(lines[1].first, "normalization must be non-negative");
    int declared = to_integer(single(2, "entry count"), lines[2].first, "entry count");
    if (declared < 1) throw ParseError(lines[2].first, "error model needs at least one entry");
    const int found = static_cast<int>(lines.size()) - 4;
    if (found != declared) {
        int where = found < declared ? lines.back().first : lines[3 + declared].first;
        throw ParseError(where, "declared " + std::to_string(declared) + " entries, found " + std::to_string(std::max(found, 0)));
    }
    for (int k = 0; k < declared; ++k) {
        const auto &[ln, fields] = lines[3 + k];
        if (static_cast<int>(fields.size()) != 1 + m.num_qubits) {
            throw ParseError(ln, "entry needs a strength and " + std::to_string(m.num_qubits) + " code(s)");
        }
        ErrorEntry e;
        e.strength = to_number(fields[0], ln);
        if (e.strength < 0) throw ParseError(ln, "negative strength " + fields[0]);
        bool trivial = true;
        for (int q = 0; q < m.num_qubits; ++q) {
            int code = to_integer(fields[1 + q], ln, "error code");
            if (code < 0 || code > 255) throw ParseError(ln, "error code out of range: " + fields[1 + q]);
            e.codes.push_back(static_cast<ErrorCode>(code));
            trivial = trivial && code == 0;
        }
        if (trivial) throw ParseError(ln, "entry with only identity codes");
        m.entries.push_back(std::move(e));
    }
    m.duration = to_integer(single(lines.size() - 1, "duration"), lines.back().first, "duration");
    if (m.duration < 0) throw ParseError(lines.back().first, "negative duration");
    return m;
}

std::string format_error_model(const ErrorModel &m) {
    std::ostringstream out;
    out.precision(17);
    out << m.num_qubits << "\n" << m.x << "\n" << m.entries.size() << "\n";
    for (const auto &e : m.entries) {
        out << e.strength;
        for (ErrorCode c : e.codes) out << " " << static_cast<int>(c);
        out << "\n";
    }
    out << m.duration << "\n";
    return out.str();
}

NormalizedErrorModel normalize(const ErrorModel &m) {
    if (m.entries.empty()) throw std::invalid_argument("error model has no entries");
    double total = 0;
    for (const auto &e : m.entries) {
        if (static_cast<int>(e.codes.size()) != m.num_qubits) {
            throw std::invalid_argument("error entry code count does not match qubit count");
        }
        total += e.strength;
    }
    if (!(total > 0)) throw std::invalid_argument("error model strengths sum to zero");
    NormalizedErrorModel n;
    n.num_qubits = m.num_qubits;
    n.x = m.x;
    n.duration = m.duration;
    double running = 0;
    for (const auto &e : m.entries) {
        n.q.push_back(m.x * e.strength / total);
        std::array<ErrorCode, 2> codes{kI, kI};
        for (int k = 0; k < m.num_qubits; ++k) codes[k] = e.codes[k];
        n.codes.push_back(codes);
        running += e.strength;
        n.cumulative.push_back(running / total);
    }
    n.cumulative.back() = 1.0;
    return n;
}

std::optional<std::size_t> sample_error(const NormalizedErrorModel &model, double p, Rng &rng) {
    const double px = p * model.x;
    if (px > 1.0 + 1e-12 || p < 0) {
        throw std::invalid_argument("error probability p*x = " + std::to_string(px) + " outside [0, 1]");
    }
    if (px <= 0) return std::nullopt;
    const double u = uniform01(rng);
    if (u >= px) return std::nullopt;
    const double r = u / px;
    auto it = std::upper_bound(model.cumulative.begin(), model.cumulative.end(), r);
    if (it == model.cumulative.end()) --it;
    return static_cast<std::size_t>(it - model.cumulative.begin());
}

ErrorModel depolarizing_model(GateKind kind) {
    switch (kind) {
        case GateKind::InitZ:
        case GateKind::MeasZ:
            return single_flip(kX, 1.0);
        case GateKind::InitX:
        case GateKind::MeasX:
            return single_flip(kZ, 1.0);
        case GateKind::H:
        case GateKind::Identity:
            return one_qubit_depolarizing(1.0);
        case GateKind::CNOT:
        case GateKind::CPhase:
            return two_qubit(1.0);
        default:
            throw std::invalid_argument("no error model for " + std::string(gate_name(kind)));
    }
}

ErrorModel asymmetric_model(GateKind kind) {
    switch (kind) {
        case GateKind::MeasZ:
            return single_flip(kX, 10.0);
        case GateKind::MeasX:
            return single_flip(kZ, 10.0);
        case GateKind::Identity:
            return one_qubit_depolarizing(0.1);
        case GateKind::CNOT:
        case GateKind::CPhase:
            return two_qubit(100.0);
        default:
            return depolarizing_model(kind);
    }
}

namespace {

constexpr std::array<GateKind, 8> kNoisyGates = {GateKind::InitZ, GateKind::InitX, GateKind::MeasZ,
                                                 GateKind::MeasX, GateKind::H,     GateKind::CNOT,
                                                 GateKind::CPhase, GateKind::Identity};

}  // namespace

ModelLibrary ModelLibrary::depolarizing() {
    ModelLibrary lib;
    lib.name_ = "depolarizing";
    for (GateKind k : kNoisyGates) lib.set(k, depolarizing_model(k));
    return lib;
}

ModelLibrary ModelLibrary::asymmetric() {
    ModelLibrary lib;
    lib.name_ = "asymmetric";
    for (GateKind k : kNoisyGates) lib.set(k, asymmetric_model(k));
    return lib;
}

ModelLibrary ModelLibrary::load_directory(const std::filesystem::path &dir) {
    const auto manifest = dir / "gates.toml";
    std::istringstream in(slurp(manifest));
    ModelLibrary lib;
    lib.name_ = dir.filename().string();
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        auto eq = raw.find('=');
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'GATE = file' in " + manifest.string());
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r\"");
            auto e = s.find_last_not_of(" \t\r\"");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(raw.substr(0, eq));
        std::string file = trim(raw.substr(eq + 1));
        auto kind = parse_gate_name(key);
        if (!kind) throw ParseError(line_no, "unknown gate '" + key + "' in " + manifest.string());
        ErrorModel model;
        try {
            model = parse_error_model(slurp(dir / file));
        } catch (const ParseError &e) {
            throw std::runtime_error((dir / file).string() + ": " + e.what());
        }
        if (model.num_qubits != gate_arity(*kind)) {
            throw std::runtime_error((dir / file).string() + ": qubit count does not match gate " + key);
        }
        lib.set(*kind, model);
    }
    return lib;
}

ModelLibrary ModelLibrary::named(const std::string &name) {
    if (name == "depolarizing") return depolarizing();
    if (name == "asymmetric") return asymmetric();
    return load_directory(name);
}

void ModelLibrary::set(GateKind kind, const ErrorModel &model) {
    models_[static_cast<int>(kind)] = normalize(model);
    raw_[static_cast<int>(kind)] = model;
}

const NormalizedErrorModel *ModelLibrary::find(GateKind kind) const {
    const auto &m = models_[static_cast<int>(kind)];
    return m ? &*m : nullptr;
}

const ErrorModel *ModelLibrary::raw(GateKind kind) const {
    const auto &m = raw_[static_cast<int>(kind)];
    return m ? &*m : nullptr;
}

int ModelLibrary::duration(GateKind kind) const {
    const auto *m = find(kind);
    return m ? m->duration : 1;
}

}  // namespace tqec
