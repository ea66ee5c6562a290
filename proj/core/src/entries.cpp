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

#include "dhtloc/entries.hpp"

#include <cctype>
#include <limits>

namespace dhtloc {

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // Overlong forms, surrogates, and values past U+10FFFF are invalid.
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp >= 0xd800 && cp <= 0xdfff) return false;
    if (cp > 0x10ffff) return false;
    i += len;
  }
  return true;
}

void put_u16_be(std::vector<std::uint8_t>& out, std::size_t value) {
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value & 0xff));
}

void put_text(std::vector<std::uint8_t>& out, std::string_view text,
              const char* what) {
  if (text.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw EncodeError(std::string(what) + " exceeds 65535 octets");
  }
  put_u16_be(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
}

// Cursor over the input with framing checks.
struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  std::uint8_t u8() {
    if (pos + 1 > bytes.size()) throw FramingError("truncated entry");
    return bytes[pos++];
  }

  std::uint16_t u16_be() {
    if (pos + 2 > bytes.size()) throw FramingError("truncated entry");
    std::uint16_t hi = bytes[pos];
    std::uint16_t lo = bytes[pos + 1];
    pos += 2;
    return static_cast<std::uint16_t>((hi << 8) | lo);
  }

  std::string text(std::size_t n) {
    if (pos + n > bytes.size()) throw FramingError("truncated entry");
    std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
    pos += n;
    if (!valid_utf8(s)) throw ValidationError("entry text is not valid UTF-8");
    return s;
  }

  Identifier identifier() {
    if (pos + Identifier::num_octets > bytes.size()) {
      throw FramingError("truncated entry");
    }
    Identifier::Octets octets;
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                Identifier::num_octets, octets.begin());
    pos += Identifier::num_octets;
    return Identifier(octets);
  }

  void finish() const {
    if (pos != bytes.size()) throw FramingError("trailing octets after entry");
  }
};

}  // namespace

void validate_address(const HostAddress& address) {
  if (address.host.empty()) throw ParseError("host must be non-empty");
  for (char c : address.host) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw ParseError("host must not contain whitespace");
    }
    if (c == '/') throw ParseError("host must not contain '/'");
  }
  if (address.port == 0) throw ParseError("port must be in [1, 65535]");
}

void validate_path(const Path& path) {
  if (path.text.empty() || path.text[0] != '/') {
    throw ParseError("path must begin with '/'");
  }
  for (char c : path.text) {
    if (c == '\0' || c == '\n' || c == '\r') {
      throw ParseError("path must not contain NUL, CR, or LF");
    }
  }
  if (!valid_utf8(path.text)) throw ParseError("path is not valid UTF-8");
}

std::string format_address(const HostAddress& address) {
  return address.host + ":" + std::to_string(address.port);
}

HostAddress parse_address(std::string_view text) {
  std::size_t colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw ParseError("address must be host:port, got \"" + std::string(text) +
                     "\"");
  }
  std::string_view port_text = text.substr(colon + 1);
  if (port_text.empty()) throw ParseError("missing port in address");
  std::uint32_t port = 0;
  for (char c : port_text) {
    if (c < '0' || c > '9') throw ParseError("port must be numeric");
    port = port * 10 + static_cast<std::uint32_t>(c - '0');
    if (port > 65535) throw ParseError("port must be in [1, 65535]");
  }
  HostAddress address{std::string(text.substr(0, colon)),
                      static_cast<std::uint16_t>(port)};
  validate_address(address);
  return address;
}

std::string format_location(const NetworkLocation& location) {
  return format_address(location.address) + location.path.text;
}

NetworkLocation parse_location(std::string_view text) {
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ParseError("location must be host:port/path, got \"" +
                     std::string(text) + "\"");
  }
  NetworkLocation location{parse_address(text.substr(0, slash)),
                           Path{std::string(text.substr(slash))}};
  validate_path(location.path);
  return location;
}

std::vector<std::uint8_t> encode_entry(const Entry& entry) {
  std::vector<std::uint8_t> out;
  std::visit(
      [&out](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, DirectEntry>) {
          validate_address(e.location.address);
          validate_path(e.location.path);
          out.push_back(magic_direct);
          put_text(out, format_location(e.location), "location");
        } else if constexpr (std::is_same_v<T, IndirectEntry>) {
          validate_path(e.path);
          out.push_back(magic_indirect);
          const auto& octets = e.host_id.octets();
          out.insert(out.end(), octets.begin(), octets.end());
          put_text(out, e.path.text, "path");
        } else {
          validate_address(e.address);
          out.push_back(magic_host);
          put_text(out, format_address(e.address), "address");
        }
      },
      entry);
  return out;
}

Entry decode_entry(std::span<const std::uint8_t> bytes) {
  Reader reader{bytes};
  std::uint8_t magic = reader.u8();
  switch (magic) {
    case magic_direct: {
      std::string text = reader.text(reader.u16_be());
      reader.finish();
      try {
        return DirectEntry{parse_location(text)};
      } catch (const ParseError& e) {
        throw ValidationError(std::string("bad direct entry: ") + e.what());
      }
    }
    case magic_indirect: {
      Identifier host_id = reader.identifier();
      Path path{reader.text(reader.u16_be())};
      reader.finish();
      try {
        validate_path(path);
      } catch (const ParseError& e) {
        throw ValidationError(std::string("bad indirect entry: ") + e.what());
      }
      return IndirectEntry{host_id, std::move(path)};
    }
    case magic_host: {
      std::string text = reader.text(reader.u16_be());
      reader.finish();
      try {
        return HostEntry{parse_address(text)};
      } catch (const ParseError& e) {
        throw ValidationError(std::string("bad host entry: ") + e.what());
      }
    }
    default:
      throw ForeignEntryError("unknown entry magic 0x" + [magic] {
        constexpr char digits[] = "0123456789abcdef";
        return std::string{digits[magic >> 4], digits[magic & 0x0f]};
      }());
  }
}

}  // namespace dhtloc
