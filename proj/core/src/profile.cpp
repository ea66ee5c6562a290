/*
 * Copyright 2026 The dhtloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dhtloc/profile.hpp"

#include <fstream>
#include <sstream>

namespace dhtloc {

namespace {

// Splits off the token before the next space; the remainder follows it.
std::string_view take_token(std::string_view& rest) {
  std::size_t space = rest.find(' ');
  std::string_view token = rest.substr(0, space);
  rest = space == std::string_view::npos ? std::string_view{}
                                         : rest.substr(space + 1);
  return token;
}

}  // namespace

HostProfile parse_profile(std::string_view text) {
  HostProfile profile;
  bool saw_host = false;
  std::size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    std::size_t newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{}
                                             : text.substr(newline + 1);
    if (line.empty() && text.empty()) break;  // trailing newline

    auto fail = [line_number](const std::string& why) -> ParseError {
      return ParseError("profile line " + std::to_string(line_number) + ": " +
                        why);
    };

    std::string_view rest = line;
    std::string_view kind = take_token(rest);
    if (kind == "host") {
      if (saw_host) throw fail("duplicate host line");
      std::string_view id = take_token(rest);
      std::string_view strategy = take_token(rest);
      if (rest.empty()) throw fail("expected: host <id> <strategy> <address>");
      profile.host_id = decode_hex(id);
      profile.strategy = parse_strategy(strategy);
      profile.address = parse_address(rest);
      saw_host = true;
    } else if (kind == "res") {
      if (!saw_host) throw fail("res line before host line");
      std::string_view id = take_token(rest);
      if (rest.empty()) throw fail("expected: res <id> <path>");
      Path path{std::string(rest)};
      validate_path(path);
      profile.resources.push_back(
          ResourceBinding{decode_hex(id), std::move(path)});
    } else {
      throw fail("unknown line kind \"" + std::string(kind) + "\"");
    }
  }
  if (!saw_host) throw ParseError("profile has no host line");
  validate_profile(profile);
  return profile;
}

std::string format_profile(const HostProfile& profile) {
  std::string out = "host " + encode_hex(profile.host_id) + " " +
                    to_string(profile.strategy) + " " +
                    format_address(profile.address) + "\n";
  for (const ResourceBinding& resource : profile.resources) {
    out += "res " + encode_hex(resource.id) + " " + resource.path.text + "\n";
  }
  return out;
}

HostProfile load_profile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open profile " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_profile(buffer.str());
}

void save_profile(const std::filesystem::path& file,
                  const HostProfile& profile) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error("cannot write profile " + file.string());
  out << format_profile(profile);
  if (!out.flush()) throw Error("failed writing profile " + file.string());
}

}  // namespace dhtloc
