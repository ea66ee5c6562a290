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

// Internal POSIX socket helpers shared by the gateway server and client.

#ifndef DHTLOC_SRC_NET_HPP
#define DHTLOC_SRC_NET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "dhtloc/error.hpp"

namespace dhtloc::net {

/// Owning socket wrapper. Closes on destruction; movable, not copyable.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  ~Socket() { close(); }

  bool valid() const noexcept { return fd_ >= 0; }
  int fd() const noexcept { return fd_; }
  int release() noexcept { return std::exchange(fd_, -1); }
  void close() noexcept;

 private:
  int fd_ = -1;
};

/// Resolves host:port and connects. Throws Error on failure.
Socket connect_to(const std::string& host, std::uint16_t port);

/// Binds and listens; port 0 picks an ephemeral port. Returns the socket and
/// the actually bound port.
std::pair<Socket, std::uint16_t> listen_on(const std::string& host,
                                           std::uint16_t port, int backlog);

/// Writes everything or throws Error (SIGPIPE suppressed).
void send_all(int fd, std::string_view data);

/// Socket-level failure (resolve, connect, send, recv, unexpected EOF).
class IoError : public dhtloc::Error {
 public:
  using dhtloc::Error::Error;
};

/// A line exceeded the reader's limit; the rest of it is still unread.
class LineTooLong : public IoError {
 public:
  using IoError::IoError;
};

/// Buffered line reader over one socket. Lines are terminated by '\n'
/// (stripped, along with one optional preceding '\r').
class LineReader {
 public:
  LineReader(int fd, std::size_t max_line) : fd_(fd), max_line_(max_line) {}

  /// Next line, or nullopt on orderly EOF at a line boundary.
  /// Throws LineTooLong past max_line, Error on IO failure or EOF mid-line.
  std::optional<std::string> read_line();

  /// Discards input through the next '\n' (or EOF); recovery after
  /// LineTooLong.
  void drain_line();

 private:
  int fd_;
  std::size_t max_line_;
  std::string buffer_;
};

}  // namespace dhtloc::net

#endif  // DHTLOC_SRC_NET_HPP
