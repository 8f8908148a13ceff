//  Copyright 2026 The vecstab Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace vecstab {

// Error taxonomy. Each enumerator maps to one of the process exit codes:
// usage errors -> 1, data errors -> 2, numerical failures -> 3.
enum class Errc {
    usage,
    io,
    bad_utf8,
    empty_vocabulary,
    unknown_word,
    malformed_header,
    dimension_mismatch,
    duplicate_word,
    non_finite_value,
    truncated_file,
    insufficient_data,
    zero_mass,
    bad_argument,
    convergence_failure,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline int exit_code_for(Errc code) noexcept {
    switch (code) {
        case Errc::usage:
        case Errc::bad_argument:
            return 1;
        case Errc::convergence_failure:
        case Errc::non_finite_value:
            return 3;
        default:
            return 2;
    }
}

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace vecstab
