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

#ifndef DHTLOC_PROFILE_HPP
#define DHTLOC_PROFILE_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "dhtloc/resolver.hpp"

namespace dhtloc {

/// Line-oriented host profile format:
///   host <40-hex-id> <direct|indirect> <host:port>
///   res <40-hex-id> <path>
/// One host line first, then one res line per resource. The path is
/// everything after the second space, so it may contain spaces.
HostProfile parse_profile(std::string_view text);  // throws ParseError

std::string format_profile(const HostProfile& profile);

HostProfile load_profile(const std::filesystem::path& file);
void save_profile(const std::filesystem::path& file,
                  const HostProfile& profile);

}  // namespace dhtloc

#endif  // DHTLOC_PROFILE_HPP
