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

#include "dhtloc/identifier.hpp"

#include <cerrno>
#include <cstring>

#if defined(__linux__)
#include <sys/random.h>
#else
#include <cstdio>
#endif

namespace dhtloc {

void SystemEntropy::fill(std::span<std::uint8_t> out) {
#if defined(__linux__)
  std::size_t done = 0;
  while (done < out.size()) {
    ssize_t n = ::getrandom(out.data() + done, out.size() - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EntropyError(std::string("getrandom failed: ") +
                         std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
#else
  std::FILE* f = std::fopen("/dev/urandom", "rb");
  if (f == nullptr) throw EntropyError("cannot open /dev/urandom");
  std::size_t n = std::fread(out.data(), 1, out.size(), f);
  std::fclose(f);
  if (n != out.size()) throw EntropyError("short read from /dev/urandom");
#endif
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = rng_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
}

std::size_t IdentifierHash::operator()(const Identifier& id) const noexcept {
  std::uint64_t h;
  std::memcpy(&h, id.octets().data(), sizeof(h));
  return static_cast<std::size_t>(h);
}

Identifier generate_identifier(EntropySource& entropy) {
  Identifier::Octets octets;
  entropy.fill(octets);
  return Identifier(octets);
}

namespace {

constexpr char hex_digits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string encode_hex(const Identifier& id) {
  std::string out;
  out.reserve(2 * Identifier::num_octets);
  for (std::uint8_t octet : id.octets()) {
    out.push_back(hex_digits[octet >> 4]);
    out.push_back(hex_digits[octet & 0x0f]);
  }
  return out;
}

Identifier decode_hex(std::string_view text) {
  constexpr std::size_t expected = 2 * Identifier::num_octets;
  if (text.size() != expected) {
    throw HexError("identifier hex must be " + std::to_string(expected) +
                       " characters, got " + std::to_string(text.size()),
                   HexError::npos);
  }
  Identifier::Octets octets;
  for (std::size_t i = 0; i < expected; i += 2) {
    int hi = hex_value(text[i]);
    if (hi < 0) {
      throw HexError("invalid hex character at position " + std::to_string(i),
                     i);
    }
    int lo = hex_value(text[i + 1]);
    if (lo < 0) {
      throw HexError(
          "invalid hex character at position " + std::to_string(i + 1), i + 1);
    }
    octets[i / 2] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return Identifier(octets);
}

}  // namespace dhtloc
