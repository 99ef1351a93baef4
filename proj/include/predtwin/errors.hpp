// SPDX-License-Identifier: Apache-2.0
//
// predtwin: predictive multi-fidelity network twin for vehicular RRM
// Copyright (C) 2026 The predtwin authors
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

namespace predtwin {

/// Every failure the library reports is one of these kinds. The CLI maps
/// them onto exit codes, tests match on them.
enum class ErrorKind {
    MalformedMap,
    UnknownVehicleKind,
    OvercrowdedNetwork,
    OutOfRange,
    MalformedTrace,
    NumericalFailure,
    LengthMismatch,
    DimensionMismatch,
    NegativeBudget,
    LinkSetMismatch,
    NoFeasibleConfig,
    EmptyNetwork,
    SearchSpaceTooLarge,
    UnsupportedScene,
    ConfigError,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace predtwin
