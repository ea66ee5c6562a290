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

#ifndef DHTLOC_BASE64_HPP
#define DHTLOC_BASE64_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dhtloc/error.hpp"

namespace dhtloc {

// Standard alphabet with '=' padding; used to frame binary values on the
// gateway wire protocol.

std::string base64_encode(std::span<const std::uint8_t> bytes);

/// Throws ParseError on characters outside the alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace dhtloc

#endif  // DHTLOC_BASE64_HPP
