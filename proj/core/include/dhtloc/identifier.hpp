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

#ifndef DHTLOC_IDENTIFIER_HPP
#define DHTLOC_IDENTIFIER_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "dhtloc/error.hpp"

namespace dhtloc {

/// The entropy source backing identifier generation failed.
class EntropyError : public Error {
 public:
  using Error::Error;
};

/// Hex text could not be decoded. position() is the offset of the first
/// offending character, or npos for a length mismatch.
class HexError : public ParseError {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  HexError(const std::string& message, std::size_t position)
      : ParseError(message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Source of random octets. Implementations either deliver the requested
/// number of octets or throw EntropyError.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Operating system CSPRNG (getrandom / /dev/urandom). Safe for concurrent
/// use: fill() holds no state between calls.
class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic source for simulations and tests. Not cryptographic.
/// Single-context: guard externally if shared between threads.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed) : rng_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 rng_;
};

/// A 160-bit key identifying a resource or a host. Stored as 20 octets,
/// big-endian; immutable value type.
class Identifier {
 public:
  static constexpr std::size_t num_octets = 20;
  using Octets = std::array<std::uint8_t, num_octets>;

  constexpr Identifier() = default;  // all-zero
  explicit constexpr Identifier(const Octets& octets) : octets_(octets) {}

  constexpr const Octets& octets() const noexcept { return octets_; }

  friend constexpr bool operator==(const Identifier&,
                                   const Identifier&) = default;
  friend constexpr auto operator<=>(const Identifier&,
                                    const Identifier&) = default;

 private:
  Octets octets_{};
};

/// Hash for unordered containers. Identifiers are uniformly random, so the
/// leading octets are already a good hash.
struct IdentifierHash {
  std::size_t operator()(const Identifier& id) const noexcept;
};

/// Draws a fresh uniformly random identifier.
Identifier generate_identifier(EntropySource& entropy);

/// 40-character lowercase hex, leading zeros preserved.
std::string encode_hex(const Identifier& id);

/// Inverse of encode_hex; accepts upper- and lowercase digits.
/// Throws HexError on wrong length or non-hex characters.
Identifier decode_hex(std::string_view text);

}  // namespace dhtloc

#endif  // DHTLOC_IDENTIFIER_HPP
