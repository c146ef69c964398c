// SPDX-License-Identifier: Apache-2.0
//
// afarq: optimal power allocation for amplify-and-forward Type-I ARQ
// Copyright (C) 2026 afarq contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace afarq {

// Raised when an argument violates a documented precondition. The message
// names the offending field so that config errors can be reported verbatim.
class InvalidArgument : public std::invalid_argument {
public:
    InvalidArgument(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class SolverErrorKind {
    InfeasibleBracket,   // bisection bracket could not be established
    ValidityRegion,      // some per-round outage >= 1 at the solution
    NonMonotone,         // constraint is not strictly monotone in the anchor
    NoConvergence,       // iterative method hit max_iters
};

class SolverError : public std::runtime_error {
public:
    SolverError(SolverErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    SolverErrorKind kind() const noexcept { return kind_; }

private:
    SolverErrorKind kind_;
};

const char* to_string(SolverErrorKind kind) noexcept;

namespace detail {

inline void require(bool ok, const char* field, const std::string& what) {
    if (!ok) {
        throw InvalidArgument(field, what);
    }
}

}  // namespace detail
}  // namespace afarq
