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

#ifndef DHTLOC_GATEWAY_HPP
#define DHTLOC_GATEWAY_HPP

#include <cstdint>
#include <memory>

#include "dhtloc/dht.hpp"
#include "dhtloc/entries.hpp"

namespace dhtloc {

// The gateway speaks a newline-delimited text protocol; one request in
// flight per connection, concurrency through multiple connections.
//
//   PUT <40-hex-key> <ttl-seconds> <base64-value>\n
//     -> OK\n
//   GET <40-hex-key>\n
//     -> VALUES <k>\n followed by k lines <remaining-ttl-seconds>
//        <base64-value>\n
//
// Any failing request answers ERR <code> <message>\n in-band and leaves the
// connection open. Codes: 400 malformed, 413 oversize, 500 internal.
inline constexpr int err_malformed = 400;
inline constexpr int err_oversize = 413;
inline constexpr int err_internal = 500;

struct GatewayConfig {
  /// Listen address. Port 0 binds an ephemeral port (see
  /// GatewayServer::port()).
  HostAddress listen{"127.0.0.1", 0};
  std::size_t max_connections = 64;
  /// Upper bound on one request line, octets.
  std::size_t max_request_octets = 8192;
};

/// Serves a DhtBackend (normally an InMemoryStore) over the wire protocol.
/// Connections are handled concurrently up to max_connections; requests on
/// one connection are processed sequentially.
class GatewayServer {
 public:
  /// The store must outlive the server and be thread-safe.
  GatewayServer(GatewayConfig config, DhtBackend& store);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  /// Binds and starts accepting. Throws Error if the address is taken.
  void start();

  /// Closes the listener and every open connection, then joins. Idempotent.
  void stop();

  /// Actually bound port (resolves ephemeral binds).
  std::uint16_t port() const;

  /// Connectable address for clients.
  HostAddress address() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// DhtBackend over a remote gateway. put/get run on one persistent
/// connection (reopened on error); batch_put fans out over up to `window`
/// concurrent connections. now() is wall time since construction. Safe for
/// concurrent use.
class GatewayClient final : public DhtBackend {
 public:
  GatewayClient(HostAddress gateway, std::size_t window);
  ~GatewayClient() override;

  void put(const Identifier& key, std::span<const std::uint8_t> value,
           Duration ttl) override;
  std::vector<StoredValue> get(const Identifier& key) override;
  BatchResult batch_put(std::span<const PutOp> ops,
                        std::size_t window) override;
  TimePoint now() override;
  void advance(Duration d) override;

  std::size_t window() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dhtloc

#endif  // DHTLOC_GATEWAY_HPP
