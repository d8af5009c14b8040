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

#include "tqec/pauli.h"

#include <algorithm>
#include <stdexcept>

namespace tqec {

char code_char(ErrorCode e) {
    switch (e) {
        case kI:
            return 'I';
        case kX:
            return 'X';
        case kZ:
            return 'Z';
        case kY:
            return 'Y';
        case kLeak:
            return 'L';
        case kLoss:
            return 'O';
        default:
            return '?';
    }
}

CompositionTable::CompositionTable(int num_codes) : num_codes_(num_codes) {
    if (num_codes < 4 || num_codes > 255) {
        throw std::invalid_argument("composition table needs between 4 and 255 codes");
    }
    table_.resize(static_cast<std::size_t>(num_codes) * num_codes);
    for (int a = 0; a < num_codes; ++a) {
        for (int b = 0; b < num_codes; ++b) {
            ErrorCode r = (a < 4 && b < 4) ? static_cast<ErrorCode>(a ^ b) : static_cast<ErrorCode>(std::max(a, b));
            table_[a * num_codes + b] = r;
        }
    }
}

ErrorCode CompositionTable::compose(ErrorCode a, ErrorCode b) const {
    if (a >= num_codes_ || b >= num_codes_) {
        throw std::out_of_range("error code " + std::to_string(std::max(a, b)) + " outside composition table");
    }
    return table_[a * num_codes_ + b];
}

void CompositionTable::set(ErrorCode a, ErrorCode b, ErrorCode result) {
    if (a >= num_codes_ || b >= num_codes_ || result >= num_codes_) {
        throw std::out_of_range("error code outside composition table");
    }
    table_[a * num_codes_ + b] = result;
    table_[b * num_codes_ + a] = result;
}

ErrorCode conjugate_h(ErrorCode e) {
    if (!is_pauli(e)) return e;
    return static_cast<ErrorCode>(((e & 1) << 1) | ((e >> 1) & 1));
}

std::pair<ErrorCode, ErrorCode> conjugate_cnot(ErrorCode control, ErrorCode target) {
    ErrorCode c = control;
    ErrorCode t = target;
    if (is_pauli(control) && is_pauli(target)) {
        if (has_x(control)) t ^= kX;
        if (has_z(target)) c ^= kZ;
    }
    return {c, t};
}

std::pair<ErrorCode, ErrorCode> conjugate_cphase(ErrorCode a, ErrorCode b) {
    ErrorCode ra = a;
    ErrorCode rb = b;
    if (is_pauli(a) && is_pauli(b)) {
        if (has_x(a)) rb ^= kZ;
        if (has_x(b)) ra ^= kZ;
    }
    return {ra, rb};
}

}  // namespace tqec
