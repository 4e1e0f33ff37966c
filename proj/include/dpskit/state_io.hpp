// Copyright 2026 The dpskit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dpskit/channels.hpp"
#include "dpskit/matrix_core.hpp"

namespace dpskit::io {

using Json = nlohmann::ordered_json;

/// Malformed input file: bad JSON, wrong schema, or a matrix failing the
/// DensityMatrix checks.
class FormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// {"dim": D, "dims": [dA, dB] (optional), "matrix": [[[re, im], ...], ...]}
struct StateFile {
    DensityMatrix rho;
    std::optional<std::array<int, 2>> dims;
};

StateFile parse_state(std::string_view text, double tol = kHermitianTol);
StateFile read_state(const std::string &path, double tol = kHermitianTol);

/// {"dim": D, "kraus": [matrix, ...]}
KrausChannel parse_channel(std::string_view text, double tol = kTracePreservingTol);
KrausChannel read_channel(const std::string &path, double tol = kTracePreservingTol);

Json matrix_json(const Matrix &m);
Json state_json(const Matrix &rho, std::optional<std::array<int, 2>> dims = std::nullopt);
Json channel_json(const KrausChannel &ch);

/// %.17g; NaN and infinities become null.
std::string format_double(double x);

/// Deterministic serialisation: insertion key order, 17 significant digits,
/// two-space indent, trailing newline.
std::string dump(const Json &j);

std::string read_file(const std::string &path);
/// Writes atomically enough for our purposes: whole string, then close.
void write_file(const std::string &path, const std::string &content);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t x);

}  // namespace dpskit::io
