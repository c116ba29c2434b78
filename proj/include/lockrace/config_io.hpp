// Copyright 2026 The Lockrace Authors
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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lockrace/model.hpp"

namespace lockrace {

/// Malformed input document (syntax or schema), with a line-precise message.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Config document:
//   {"horizon": T, "cost_factor": nu,
//    "players": [{"rate": beta, "rewards": [c_1, ..., c_M]}, ...]}
// M is inferred from the rewards length.

/// Parses and validates; throws ParseError or ConfigError.
GameConfig parse_config(const std::string& text, const std::string& source = "<config>");
GameConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const GameConfig& cfg);

// Profile document: {"players": [{"theta": [theta_1, ..., theta_M]}, ...]};
// the `solve` output is itself a valid profile document.
StrategyProfile parse_profile(const std::string& text, const std::string& source = "<profile>");
StrategyProfile load_profile(const std::filesystem::path& path);
nlohmann::json profile_to_json(const StrategyProfile& profile);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace lockrace
