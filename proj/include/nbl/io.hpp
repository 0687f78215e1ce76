// Copyright 2026 The nbl Authors
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

// JSON encodings for every file the CLI reads or writes. Doubles are written in
// shortest round-trip form, so decode(encode(v)) reproduces v bit for bit.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nbl/analysis.hpp"
#include "nbl/boxes.hpp"
#include "nbl/protocols.hpp"
#include "nbl/quantum.hpp"
#include "nbl/sphere_cover.hpp"

namespace nbl::io {

using Json = nlohmann::json;

/// {"x_size", "y_size", "a_size", "b_size", "table": table[x][y] = row-major a*b probabilities}
Json box_to_json(const CorrelationBox& box);
CorrelationBox box_from_json(const Json& j);

/// Unitaries as 8 reals (row-major, re/im interleaved); "f"/"g" hold one
/// [label(0), label(1)] pair per input symbol.
Json bell_spec_to_json(const BellBoxSpec& spec);
BellBoxSpec bell_spec_from_json(const Json& j);

Json unitary_to_json(const Unitary2& u);
Unitary2 unitary_from_json(const Json& j);

/// {"k", "shape", "alice_queries", "bob_queries", "alice_output", "bob_output"},
/// tables in DeterministicProtocol's documented index order.
Json protocol_to_json(const DeterministicProtocol& protocol);
DeterministicProtocol protocol_from_json(const Json& j);

/// {"weights": [...], "protocols": [...]}; a bare deterministic protocol is read
/// as a singleton mixture.
Json randomized_protocol_to_json(const RandomizedProtocol& protocol);
RandomizedProtocol randomized_protocol_from_json(const Json& j);

/// [[intercept, slope], ...]
Json family_to_json(const std::vector<AffineFunction>& family);
std::vector<AffineFunction> family_from_json(const Json& j);

Json certificate_to_json(const GapCertificate& certificate);
GapCertificate certificate_from_json(const Json& j);

/// {"points": [[x, y, z], ...], "covering_radius", "target_epsilon", "attempts", "audit": {...}}
Json cover_to_json(const SphereCover& cover);
SphereCover cover_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place, so readers never
/// observe a partial file.
void write_text_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace nbl::io
