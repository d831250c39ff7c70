// Copyright 2026 The fedgame Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

/**
 * \file fedgame/io.hpp
 *
 * \brief Instance files and partition specs.
 *
 * Instance file: {"mu_e": "10", "sigma2": "1", "players": [1, 8, 15]}. The
 * parameters are rational strings ("10/3" and "2.5" are accepted); bare JSON
 * numbers are accepted when integral.
 *
 * Partition spec: zero-based player ids, comma-separated within a group and
 * semicolon-separated between groups, e.g. "0,2;1".
 */

#pragma once

#include <fedgame/model.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fedgame {

/// Malformed instance file or partition spec.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace io_detail {

inline Rational rational_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return parse_rational(std::to_string(v.get<std::int64_t>()));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
  throw ParseError(std::string("field '") + key + "' must be a rational string");
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace io_detail

inline Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  Rational mu_e = io_detail::rational_field(j, "mu_e");
  Rational sigma2 = io_detail::rational_field(j, "sigma2");
  if (!j.contains("players") || !j.at("players").is_array()) throw ParseError("'players' must be an array");
  std::vector<SampleCount> sizes;
  for (const auto& p : j.at("players")) {
    if (!p.is_number_integer()) throw ParseError("player sizes must be integers");
    sizes.push_back(p.get<SampleCount>());
  }
  try {
    return Instance(GameParams(std::move(mu_e), std::move(sigma2)), std::move(sizes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  return {{"mu_e", to_exact_string(inst.params().mu_e())},
          {"sigma2", to_exact_string(inst.params().sigma2())},
          {"players", inst.sizes()}};
}

inline Instance parse_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline std::string render_instance(const Instance& inst) { return instance_to_json(inst).dump(); }

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

/// Groups of ids from a spec; does not check that they form a partition.
inline std::vector<std::vector<PlayerId>> parse_groups(std::string_view spec) {
  std::vector<std::vector<PlayerId>> groups;
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == sep) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };
  if (io_detail::trim(spec).empty()) throw ParseError("empty partition spec");
  for (auto group : split(spec, ';')) {
    std::vector<PlayerId> ids;
    for (auto item : split(group, ',')) {
      item = io_detail::trim(item);
      PlayerId id = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw ParseError("malformed partition spec '" + std::string(spec) + "'");
      }
      ids.push_back(id);
    }
    groups.push_back(std::move(ids));
  }
  return groups;
}

inline Partition parse_partition(std::string_view spec, const Instance& inst) {
  auto groups = parse_groups(spec);
  try {
    return Partition(inst, groups);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("spec is not a partition of the players: ") + e.what());
  }
}

inline std::string render_partition_spec(const Partition& p) {
  std::string out;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (c) out += ';';
    const auto& m = p.coalitions()[c].members();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(m[i]);
    }
  }
  return out;
}

/// Letter names a, b, c, ... when there are at most 26 players, else ids.
inline std::string player_name(PlayerId id, std::size_t players) {
  if (players <= 26) return std::string(1, static_cast<char>('a' + id));
  return std::to_string(id);
}

inline std::string render_group(const std::vector<PlayerId>& ids, std::size_t players) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += player_name(ids[i], players);
  }
  return out + "}";
}

/// "{a,b} | {c}".
inline std::string render_partition(const Partition& p) {
  std::string out;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (c) out += " | ";
    out += render_group(p.coalitions()[c].members(), p.player_count());
  }
  return out;
}

}  // namespace fedgame
