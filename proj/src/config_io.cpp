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

#include "lockrace/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lockrace {

using nlohmann::json;

namespace {

std::string location(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
  const auto last_nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
  const std::size_t column = last_nl == std::string::npos ? byte : byte - last_nl - 1;
  return "line " + std::to_string(line) + ", column " + std::to_string(column + 1);
}

json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(source + ": " + location(text, byte) + ": malformed JSON (" +
                     e.what() + ")");
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  if (!obj[key].is_number()) {
    throw ParseError(where + ": field \"" + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

std::vector<double> require_numbers(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_array()) {
    throw ParseError(where + ": field \"" + key + "\" must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      throw ParseError(where + ": field \"" + key + "\" must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

const json& require_players(const json& doc, const std::string& source) {
  if (!doc.is_object()) {
    throw ParseError(source + ": top-level value must be an object");
  }
  if (!doc.contains("players") || !doc["players"].is_array()) {
    throw ParseError(source + ": field \"players\" must be an array");
  }
  return doc["players"];
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

GameConfig parse_config(const std::string& text, const std::string& source) {
  const json doc = parse_document(text, source);
  const json& players = require_players(doc, source);
  GameConfig cfg;
  cfg.horizon = require_number(doc, "horizon", source);
  cfg.cost_factor = require_number(doc, "cost_factor", source);
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string where = source + ": players[" + std::to_string(i) + "]";
    if (!players[i].is_object()) {
      throw ParseError(where + ": must be an object");
    }
    cfg.players.push_back(PlayerSpec{require_number(players[i], "rate", where),
                                     require_numbers(players[i], "rewards", where)});
  }
  require_valid(cfg);
  return cfg;
}

GameConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string());
}

json config_to_json(const GameConfig& cfg) {
  json players = json::array();
  for (const auto& p : cfg.players) {
    players.push_back({{"rate", p.rate}, {"rewards", p.rewards}});
  }
  return {{"horizon", cfg.horizon}, {"cost_factor", cfg.cost_factor}, {"players", players}};
}

StrategyProfile parse_profile(const std::string& text, const std::string& source) {
  const json doc = parse_document(text, source);
  const json& players = require_players(doc, source);
  StrategyProfile profile;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string where = source + ": players[" + std::to_string(i) + "]";
    if (!players[i].is_object()) {
      throw ParseError(where + ": must be an object");
    }
    profile.push_back(MTStrategy{require_numbers(players[i], "theta", where)});
  }
  return profile;
}

StrategyProfile load_profile(const std::filesystem::path& path) {
  return parse_profile(read_text_file(path), path.string());
}

json profile_to_json(const StrategyProfile& profile) {
  json players = json::array();
  for (const auto& s : profile) {
    players.push_back({{"theta", s.thresholds}});
  }
  return {{"players", players}};
}

}  // namespace lockrace
