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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace meanking::cli {

/// Environment variable overriding the default seed.
inline constexpr const char* kSeedEnv = "MEANKING_SEED";
/// Environment variable overriding the golden-file directory used by verify.
inline constexpr const char* kGoldenEnv = "MEANKING_GOLDEN_DIR";

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::filesystem::path default_golden_dir();
/// MEANKING_SEED when set and valid, the built-in default otherwise.
std::uint64_t default_seed();

std::vector<Check> invariant_checks();
std::vector<Check> golden_checks(const std::filesystem::path& dir);

/// Entry point; args[0] is the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace meanking::cli
