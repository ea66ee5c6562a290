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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dhtloc/identifier.hpp"

using namespace dhtloc;

namespace {

Identifier id_with_last_octet(std::uint8_t v) {
  Identifier::Octets octets{};
  octets.back() = v;
  return Identifier(octets);
}

struct BrokenEntropy final : EntropySource {
  void fill(std::span<std::uint8_t>) override {
    throw EntropyError("entropy source exhausted");
  }
};

}  // namespace

TEST_CASE("hex encoding of all-zero identifier") {
  CHECK(encode_hex(Identifier{}) == std::string(40, '0'));
}

TEST_CASE("hex encoding preserves leading zeros") {
  CHECK(encode_hex(id_with_last_octet(1)) == std::string(39, '0') + "1");
  CHECK(encode_hex(id_with_last_octet(0x2a)) == std::string(38, '0') + "2a");
}

TEST_CASE("hex encoding is 40 lowercase characters") {
  SystemEntropy entropy;
  for (int i = 0; i < 32; ++i) {
    std::string hex = encode_hex(generate_identifier(entropy));
    CHECK(hex.size() == 40);
    CHECK(std::all_of(hex.begin(), hex.end(), [](char c) {
      return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    }));
  }
}

TEST_CASE("decode_hex inverts encode_hex") {
  CHECK(decode_hex(std::string(40, '0')) == Identifier{});

  SeededEntropy entropy(7);
  for (int i = 0; i < 1000; ++i) {
    Identifier id = generate_identifier(entropy);
    CHECK(decode_hex(encode_hex(id)) == id);
  }
}

TEST_CASE("decode_hex accepts uppercase") {
  std::string upper(40, 'A');
  std::string lower(40, 'a');
  CHECK(decode_hex(upper) == decode_hex(lower));
}

TEST_CASE("decode_hex rejects wrong lengths") {
  CHECK_THROWS_AS(decode_hex(std::string(39, '0')), HexError);
  CHECK_THROWS_AS(decode_hex(std::string(41, '0')), HexError);
  CHECK_THROWS_AS(decode_hex(""), HexError);
  try {
    decode_hex(std::string(39, '0'));
    FAIL("expected HexError");
  } catch (const HexError& e) {
    CHECK(e.position() == HexError::npos);
  }
}

TEST_CASE("decode_hex names the offending position") {
  std::string bad(40, '0');
  bad[0] = 'z';
  try {
    decode_hex(bad);
    FAIL("expected HexError");
  } catch (const HexError& e) {
    CHECK(e.position() == 0);
  }

  bad = std::string(40, '0');
  bad[17] = 'g';
  try {
    decode_hex(bad);
    FAIL("expected HexError");
  } catch (const HexError& e) {
    CHECK(e.position() == 17);
  }
}

TEST_CASE("successive draws differ") {
  SystemEntropy entropy;
  Identifier a = generate_identifier(entropy);
  Identifier b = generate_identifier(entropy);
  CHECK(a != b);
}

TEST_CASE("a million draws contain no duplicates") {
  SystemEntropy entropy;
  std::vector<Identifier::Octets> ids(1'000'000);
  for (auto& octets : ids) {
    entropy.fill(octets);
  }
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("every bit position is uniform over 1e5 draws") {
  SystemEntropy entropy;
  constexpr int draws = 100'000;
  std::array<int, 160> ones{};
  for (int d = 0; d < draws; ++d) {
    Identifier id = generate_identifier(entropy);
    for (std::size_t octet = 0; octet < Identifier::num_octets; ++octet) {
      std::uint8_t value = id.octets()[octet];
      for (int bit = 0; bit < 8; ++bit) {
        ones[octet * 8 + bit] += (value >> bit) & 1;
      }
    }
  }
  for (int count : ones) {
    double frequency = static_cast<double>(count) / draws;
    CHECK(frequency > 0.49);
    CHECK(frequency < 0.51);
  }
}

TEST_CASE("entropy failure surfaces as EntropyError") {
  BrokenEntropy broken;
  CHECK_THROWS_AS(generate_identifier(broken), EntropyError);
}

TEST_CASE("identifiers order and hash consistently") {
  Identifier one = id_with_last_octet(1);
  Identifier two = id_with_last_octet(2);
  CHECK(one < two);
  CHECK(IdentifierHash{}(one) == IdentifierHash{}(one));
  SeededEntropy entropy(3);
  Identifier a = generate_identifier(entropy);
  Identifier b = generate_identifier(entropy);
  CHECK(IdentifierHash{}(a) != IdentifierHash{}(b));
}
