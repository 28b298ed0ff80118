// Copyright 2025-2026 The casc developers
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

#pragma once

#include <json.hpp>

#include <string>
#include <variant>

#include "casc/parallelize.hpp"
#include "casc/verify.hpp"

namespace casc {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

Json cascade_to_json(const MNCascade& c);
Json cascade_to_json(const ControlCascade& c);
std::variant<MNCascade, ControlCascade> cascade_from_json(const Json& j);

Json report_to_json(const CompilationReport& r);
Json equivalence_to_json(const EquivalenceResult& r);
Json parts_to_json(const PrecomputeParts& p);

/** Best-effort assembly text for basis-lowered circuits. */
std::string export_assembly(const Circuit& c);

void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace casc
