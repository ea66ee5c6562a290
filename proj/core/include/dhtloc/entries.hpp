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

#ifndef DHTLOC_ENTRIES_HPP
#define DHTLOC_ENTRIES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dhtloc/error.hpp"
#include "dhtloc/identifier.hpp"

namespace dhtloc {

/// Host network address: IP literal or DNS name plus TCP port.
/// Canonical text form is "host:port".
struct HostAddress {
  std::string host;    // non-empty, no whitespace, no '/'
  std::uint16_t port;  // 1..65535

  friend bool operator==(const HostAddress&, const HostAddress&) = default;
};

/// Resource path within a host. Non-empty UTF-8 beginning with '/'
/// (may be just "/"); no NUL, CR, or LF.
struct Path {
  std::string text;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Full network location of a resource. Canonical text form is
/// "host:port/path".
struct NetworkLocation {
  HostAddress address;
  Path path;

  friend bool operator==(const NetworkLocation&,
                         const NetworkLocation&) = default;
};

void validate_address(const HostAddress& address);  // throws ParseError
void validate_path(const Path& path);               // throws ParseError

std::string format_address(const HostAddress& address);
HostAddress parse_address(std::string_view text);

std::string format_location(const NetworkLocation& location);
NetworkLocation parse_location(std::string_view text);

/// Entry stored under a resource identifier; value is the full location.
struct DirectEntry {
  NetworkLocation location;

  friend bool operator==(const DirectEntry&, const DirectEntry&) = default;
};

/// Entry stored under a resource identifier; names the owning host plus the
/// host-local path. Resolution needs a second lookup for the host entry.
struct IndirectEntry {
  Identifier host_id;
  Path path;

  friend bool operator==(const IndirectEntry&, const IndirectEntry&) = default;
};

/// Entry stored under a host identifier; the single record rewritten when
/// the host changes its network address.
struct HostEntry {
  HostAddress address;

  friend bool operator==(const HostEntry&, const HostEntry&) = default;
};

using Entry = std::variant<DirectEntry, IndirectEntry, HostEntry>;

// One-octet magic numbers discriminating stored values. Values outside this
// set belong to other applications sharing the table.
inline constexpr std::uint8_t magic_direct = 0x01;
inline constexpr std::uint8_t magic_indirect = 0x02;
inline constexpr std::uint8_t magic_host = 0x03;

/// A text field exceeded the 16-bit length prefix on encode.
class EncodeError : public Error {
 public:
  using Error::Error;
};

/// Base of all decode_entry failures.
class EntryDecodeError : public Error {
 public:
  using Error::Error;
};

/// The leading magic octet belongs to some other application.
class ForeignEntryError : public EntryDecodeError {
 public:
  using EntryDecodeError::EntryDecodeError;
};

/// Input too short or with trailing garbage.
class FramingError : public EntryDecodeError {
 public:
  using EntryDecodeError::EntryDecodeError;
};

/// Well-framed input whose payload violates a field invariant
/// (bad UTF-8, malformed location, ...).
class ValidationError : public EntryDecodeError {
 public:
  using EntryDecodeError::EntryDecodeError;
};

/// Binary layout, all integers big-endian:
///   direct:   0x01 | u16 length | location text
///   indirect: 0x02 | 20-octet host id | u16 length | path text
///   host:     0x03 | u16 length | "host:port"
std::vector<std::uint8_t> encode_entry(const Entry& entry);

/// Inverse of encode_entry. Throws ForeignEntryError on unknown magic,
/// FramingError on truncated or oversized input, ValidationError on
/// malformed payloads.
Entry decode_entry(std::span<const std::uint8_t> bytes);

}  // namespace dhtloc

#endif  // DHTLOC_ENTRIES_HPP
