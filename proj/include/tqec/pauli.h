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

#ifndef TQEC_PAULI_H
#define TQEC_PAULI_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tqec {

/// Error codes carried by tracked errors. Codes 0-3 form the Pauli group
/// (bit 0 = X component, bit 1 = Z component). Codes 4 and up are
/// non-Pauli markers (leakage, loss) that do not propagate.
using ErrorCode = std::uint8_t;

inline constexpr ErrorCode kI = 0;
inline constexpr ErrorCode kX = 1;
inline constexpr ErrorCode kZ = 2;
inline constexpr ErrorCode kY = 3;
inline constexpr ErrorCode kLeak = 4;
inline constexpr ErrorCode kLoss = 5;

inline constexpr bool is_pauli(ErrorCode e) { return e < 4; }
inline constexpr bool has_x(ErrorCode e) { return e < 4 && (e & 1); }
inline constexpr bool has_z(ErrorCode e) { return e < 4 && (e & 2); }

enum class Basis : std::uint8_t { Z, X };

/// True when a measurement in `basis` reports a flip for error `e`.
inline constexpr bool flips_measurement(ErrorCode e, Basis basis) {
    return basis == Basis::Z ? has_x(e) : has_z(e);
}

/// The component of `e` seen by a measurement in `basis` (X for Z-basis
/// measurements, Z for X-basis measurements).
inline constexpr ErrorCode detected_component(Basis basis) { return basis == Basis::Z ? kX : kZ; }

char code_char(ErrorCode e);

/// Composition rule for error codes on one qubit. Pauli codes compose by
/// XOR (up to phase). Whenever a non-Pauli code is involved the larger code
/// wins unless an override has been set.
class CompositionTable {
   public:
    explicit CompositionTable(int num_codes = 6);

    int num_codes() const { return num_codes_; }
    ErrorCode compose(ErrorCode a, ErrorCode b) const;
    void set(ErrorCode a, ErrorCode b, ErrorCode result);

   private:
    int num_codes_;
    std::vector<ErrorCode> table_;
};

/// Heisenberg action of the supported unitaries on Pauli codes.
ErrorCode conjugate_h(ErrorCode e);
std::pair<ErrorCode, ErrorCode> conjugate_cnot(ErrorCode control, ErrorCode target);
std::pair<ErrorCode, ErrorCode> conjugate_cphase(ErrorCode a, ErrorCode b);

}  // namespace tqec

#endif  // TQEC_PAULI_H
