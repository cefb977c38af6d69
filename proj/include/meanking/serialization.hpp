// Copyright 2026 The meanking Authors
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

// JSON encodings shared by the CLI, the golden files and the tests.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "meanking/experiment.hpp"
#include "meanking/linalg.hpp"
#include "meanking/optics.hpp"
#include "meanking/strategies.hpp"

namespace meanking {

using Json = nlohmann::json;

class SerializationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// [[re, im], ...] in basis order.
Json to_json(const CVector& v);
CVector vector_from_json(const Json& j);
Json to_json(const StateVector& s);
/// Rows of [re, im] pairs.
Json to_json(const Operator& op);
CMatrix matrix_from_json(const Json& j);

Json to_json(const VaaBasis& basis);
Json to_json(const ImperfectionConfig& cfg);
/// Missing keys keep their ideal defaults; unknown keys are rejected.
ImperfectionConfig imperfections_from_json(const Json& j);

Json to_json(const BobPolicy& policy);
BobPolicy policy_from_json(const Json& j, Game game);
Json to_json(const TrialPlan& plan);
TrialPlan plan_from_json(const Json& j);

Json to_json(const CountTable& table);
Json to_json(const ThresholdReport& report);
/// {game, resolution, optimum, argmax_angles, runtime_ms}
Json to_json(const SearchResult& result);

Json to_json(const DetectionDistribution& d);

/// Parses a file, naming it in any error.
Json load_json_file(const std::filesystem::path& path);

/// Rounds to 12 significant digits as printed by the CLI; |x| < 1e-15 becomes 0.
double round12(double x);

}  // namespace meanking
