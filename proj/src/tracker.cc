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

#include "tqec/tracker.h"

#include <algorithm>
#include <cstdio>

namespace tqec {

std::string format_errors(std::span<const TrackedError> errors, int digits) {
    std::string out;
    char buf[96];
    for (const auto &e : errors) {
        std::snprintf(buf, sizeof(buf), "(%c, %.*f, %lld)\n", code_char(e.code), digits, e.p,
                      static_cast<long long>(e.label));
        out += buf;
    }
    return out;
}

ErrorTracker::ErrorTracker(int num_qubits, const ModelLibrary &models, double p)
    : models_(&models), p_(p), lists_(num_qubits), clock_(num_qubits, 0) {
    if (p < 0 || p > 1) throw std::invalid_argument("gate error rate must lie in [0, 1]");
}

void ErrorTracker::add_label_slot(Label label, FaultSite where, double p) {
    if (static_cast<Label>(copies_.size()) <= label) {
        copies_.resize(label + 1, 0);
        origin_.resize(label + 1);
        probability_.resize(label + 1, 0.0);
    }
    origin_[label] = where;
    probability_[label] = p;
}

void ErrorTracker::drop_copy(Label label) {
    if (label >= 0 && label < static_cast<Label>(copies_.size())) --copies_[label];
}

int ErrorTracker::live_copies(Label label) const {
    if (label < 0 || label >= static_cast<Label>(copies_.size())) return 0;
    return copies_[label];
}

void ErrorTracker::set_next_label(Label label) {
    next_label_ = label;
    if (static_cast<Label>(copies_.size()) < label) {
        copies_.resize(label, 0);
        origin_.resize(label);
        probability_.resize(label, 0.0);
    }
}

void ErrorTracker::set_errors(int qubit, std::vector<TrackedError> errors) {
    for (const auto &e : lists_[qubit]) drop_copy(e.label);
    std::sort(errors.begin(), errors.end(), [](const TrackedError &a, const TrackedError &b) { return a.label < b.label; });
    for (const auto &e : errors) {
        if (e.label >= static_cast<Label>(copies_.size())) add_label_slot(e.label, {}, e.p);
        ++copies_[e.label];
        next_label_ = std::max(next_label_, e.label + 1);
    }
    lists_[qubit] = std::move(errors);
}

void ErrorTracker::merge_into(int qubit, std::vector<TrackedError> &additions) {
    if (additions.empty()) return;
    const auto &table = models_->table();
    auto &list = lists_[qubit];
    std::vector<TrackedError> merged;
    merged.reserve(list.size() + additions.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < list.size() || b < additions.size()) {
        if (b == additions.size() || (a < list.size() && list[a].label < additions[b].label)) {
            merged.push_back(list[a++]);
        } else if (a == list.size() || additions[b].label < list[a].label) {
            merged.push_back(additions[b]);
            ++copies_[additions[b].label];
            ++b;
        } else {
            ErrorCode code = table.compose(list[a].code, additions[b].code);
            if (code == kI) {
                drop_copy(list[a].label);
            } else {
                merged.push_back({code, list[a].p, list[a].label});
            }
            ++a;
            ++b;
        }
    }
    list.swap(merged);
}

void ErrorTracker::propagate(GateKind kind, std::span<const int> qubits) {
    switch (kind) {
        case GateKind::H:
            for (auto &e : lists_[qubits[0]]) e.code = conjugate_h(e.code);
            return;
        case GateKind::CNOT: {
            // X on the control spreads to the target, Z on the target to the control.
            const int c = qubits[0];
            const int t = qubits[1];
            scratch_a_.clear();
            scratch_b_.clear();
            for (const auto &e : lists_[c]) {
                if (has_x(e.code)) scratch_a_.push_back({kX, e.p, e.label});
            }
            for (const auto &e : lists_[t]) {
                if (has_z(e.code)) scratch_b_.push_back({kZ, e.p, e.label});
            }
            merge_into(t, scratch_a_);
            merge_into(c, scratch_b_);
            return;
        }
        case GateKind::CPhase: {
            // H(b) CNOT(a, b) H(b): X on either side leaves a Z on the other.
            const int a = qubits[0];
            const int b = qubits[1];
            scratch_a_.clear();
            scratch_b_.clear();
            for (const auto &e : lists_[a]) {
                if (has_x(e.code)) scratch_a_.push_back({kZ, e.p, e.label});
            }
            for (const auto &e : lists_[b]) {
                if (has_x(e.code)) scratch_b_.push_back({kZ, e.p, e.label});
            }
            merge_into(b, scratch_a_);
            merge_into(a, scratch_b_);
            return;
        }
        case GateKind::Identity:
        case GateKind::Dead:
            return;
        default:
            throw std::invalid_argument("cannot propagate through " + std::string(gate_name(kind)));
    }
}

void ErrorTracker::inject(const NormalizedErrorModel &model, std::span<const int> qubits, FaultSite where) {
    if (p_ == 0) return;
    if (p_ * model.x > 1.0 + 1e-12) {
        throw std::invalid_argument("error probability p*x = " + std::to_string(p_ * model.x) + " exceeds 1");
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        const Label label = next_label_++;
        const double p = p_ * model.q[i];
        add_label_slot(label, {where.step, where.gate, static_cast<int>(i)}, p);
        for (int k = 0; k < model.num_qubits; ++k) {
            ErrorCode code = model.codes[i][k];
            if (code == kI) continue;
            lists_[qubits[k]].push_back({code, p, label});
            ++copies_[label];
        }
    }
}

void ErrorTracker::init(int qubit, Basis basis, FaultSite where) {
    for (const auto &e : lists_[qubit]) drop_copy(e.label);
    lists_[qubit].clear();
    const GateKind kind = basis == Basis::Z ? GateKind::InitZ : GateKind::InitX;
    if (const auto *m = models_->find(kind)) inject(*m, std::span<const int>(&qubit, 1), where);
    clock_[qubit] += models_->duration(kind);
}

std::vector<TrackedError> ErrorTracker::measure(int qubit, Basis basis, FaultSite where) {
    const GateKind kind = basis == Basis::Z ? GateKind::MeasZ : GateKind::MeasX;
    if (const auto *m = models_->find(kind)) inject(*m, std::span<const int>(&qubit, 1), where);
    std::vector<TrackedError> harvest;
    for (const auto &e : lists_[qubit]) {
        if (flips_measurement(e.code, basis)) harvest.push_back({detected_component(basis), e.p, e.label});
        drop_copy(e.label);
    }
    lists_[qubit].clear();
    clock_[qubit] += models_->duration(kind);
    return harvest;
}

void ErrorTracker::dead(int qubit, int duration) {
    if (!lists_[qubit].empty()) {
        throw std::logic_error("DEAD gate on qubit " + std::to_string(qubit) + " holding tracked errors");
    }
    clock_[qubit] += duration;
}

void ErrorTracker::apply(const GateEvent &gate, FaultSite where, std::vector<TrackedError> *harvest) {
    const int q = gate.qubits[0];
    switch (gate.kind) {
        case GateKind::InitZ:
        case GateKind::InitX:
            init(q, gate_basis(gate.kind), where);
            return;
        case GateKind::MeasZ:
        case GateKind::MeasX: {
            auto h = measure(q, gate_basis(gate.kind), where);
            if (harvest) *harvest = std::move(h);
            return;
        }
        case GateKind::Dead:
            dead(q, gate.duration);
            return;
        default:
            break;
    }
    propagate(gate.kind, gate.targets());
    if (const auto *m = models_->find(gate.kind)) inject(*m, gate.targets(), where);
    for (int t : gate.targets()) clock_[t] += models_->duration(gate.kind);
}

FrameSimulator::FrameSimulator(const Circuit &circuit, const CircuitIndex &index, const ModelLibrary &models)
    : circuit_(&circuit), index_(&index), models_(&models), frame_(circuit.num_qubits(), kI) {
    for (int k = 0; k < kNumGateKinds; ++k) model_of_.push_back(models.find(static_cast<GateKind>(k)));
}

void FrameSimulator::gate_action(const GateEvent &g) {
    switch (g.kind) {
        case GateKind::H:
            frame_[g.qubits[0]] = conjugate_h(frame_[g.qubits[0]]);
            break;
        case GateKind::CNOT: {
            auto [c, t] = conjugate_cnot(frame_[g.qubits[0]], frame_[g.qubits[1]]);
            frame_[g.qubits[0]] = c;
            frame_[g.qubits[1]] = t;
            break;
        }
        case GateKind::CPhase: {
            auto [a, b] = conjugate_cphase(frame_[g.qubits[0]], frame_[g.qubits[1]]);
            frame_[g.qubits[0]] = a;
            frame_[g.qubits[1]] = b;
            break;
        }
        case GateKind::InitZ:
        case GateKind::InitX:
            frame_[g.qubits[0]] = kI;
            break;
        default:
            break;
    }
}

void FrameSimulator::apply_entry(const NormalizedErrorModel &model, std::size_t entry, const GateEvent &g) {
    const auto &table = models_->table();
    for (int k = 0; k < model.num_qubits; ++k) {
        ErrorCode code = model.codes[entry][k];
        if (code != kI) frame_[g.qubits[k]] = table.compose(frame_[g.qubits[k]], code);
    }
}

void FrameSimulator::measure(const GateEvent &g, int index, std::vector<std::uint8_t> &flips, Rng *rng) {
    const int q = g.qubits[0];
    const ErrorCode code = frame_[q];
    if (is_pauli(code)) {
        flips[index] = flips_measurement(code, gate_basis(g.kind)) ? 1 : 0;
    } else {
        flips[index] = (leaked_policy == LeakedMeasurement::Random && rng) ? static_cast<std::uint8_t>((*rng)() & 1) : 0;
    }
    frame_[q] = kI;
}

void FrameSimulator::sample(double p, Rng &rng, std::vector<std::uint8_t> &flips) {
    flips.assign(index_->num_measurements(), 0);
    std::fill(frame_.begin(), frame_.end(), kI);
    const auto &steps = circuit_->steps;
    for (int s = 0; s < static_cast<int>(steps.size()); ++s) {
        for (int gi = 0; gi < static_cast<int>(steps[s].size()); ++gi) {
            const auto &g = steps[s][gi];
            const auto *model = model_of_[static_cast<int>(g.kind)];
            if (g.kind == GateKind::Dead) continue;
            gate_action(g);
            if (model) {
                if (auto e = sample_error(*model, p, rng)) apply_entry(*model, *e, g);
            }
            if (is_measurement(g.kind)) measure(g, index_->measurement_at(s, gi), flips, &rng);
        }
    }
}

void FrameSimulator::run_forced(std::span<const ForcedFault> faults, std::vector<std::uint8_t> &flips) {
    flips.assign(index_->num_measurements(), 0);
    std::fill(frame_.begin(), frame_.end(), kI);
    if (faults.empty()) return;
    const auto &steps = circuit_->steps;
    std::size_t next = 0;
    for (int s = faults.front().step; s < static_cast<int>(steps.size()); ++s) {
        for (int gi = 0; gi < static_cast<int>(steps[s].size()); ++gi) {
            const auto &g = steps[s][gi];
            if (g.kind == GateKind::Dead) continue;
            gate_action(g);
            while (next < faults.size() && faults[next].step == s && faults[next].gate == gi) {
                const auto *model = model_of_[static_cast<int>(g.kind)];
                if (!model || faults[next].entry < 0 || faults[next].entry >= static_cast<int>(model->size())) {
                    throw std::out_of_range("forced fault does not name a model entry");
                }
                apply_entry(*model, faults[next].entry, g);
                ++next;
            }
            if (is_measurement(g.kind)) measure(g, index_->measurement_at(s, gi), flips, nullptr);
        }
    }
}

std::vector<std::uint8_t> set_parities(const CircuitIndex &index, std::span<const std::uint8_t> flips) {
    std::vector<std::uint8_t> out(index.num_sets(), 0);
    for (int k = 0; k < index.num_sets(); ++k) {
        for (int m : index.set_measurements(k)) out[k] ^= flips[m];
    }
    return out;
}

std::vector<std::uint8_t> observable_parities(const CircuitIndex &index, std::span<const std::uint8_t> flips) {
    std::vector<std::uint8_t> out(index.num_observables(), 0);
    for (int k = 0; k < index.num_observables(); ++k) {
        for (int m : index.observable_measurements(k)) out[k] ^= flips[m];
    }
    return out;
}

}  // namespace tqec
