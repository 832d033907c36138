// Copyright 2026 The photinject Authors
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

// Internal JSON bindings shared by the circuit and experiment modules.

#include <json.hpp>

#include "photinject/circuit.hpp"

namespace photinject::detail {

ParamCircuit circuit_from_json(const nlohmann::json &j);
nlohmann::json circuit_to_json(const ParamCircuit &c);

}  // namespace photinject::detail
