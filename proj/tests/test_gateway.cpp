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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <random>
#include <thread>

#include "dhtloc/base64.hpp"
#include "dhtloc/gateway.hpp"
#include "dhtloc/resolver.hpp"
#include "support/conformance.hpp"

using namespace dhtloc;
using namespace std::chrono_literals;
namespace ts = dhtloc::testsupport;

namespace {

// Bare-bones protocol probe, deliberately independent of GatewayClient.
class RawConn {
 public:
  explicit RawConn(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd_ >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) ==
            0);
  }
  ~RawConn() { close(); }

  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  void send_text(std::string_view text) {
    REQUIRE(::send(fd_, text.data(), text.size(), MSG_NOSIGNAL) ==
            static_cast<ssize_t>(text.size()));
  }

  std::string recv_line() {
    std::string line;
    char c;
    for (;;) {
      ssize_t n = ::recv(fd_, &c, 1, 0);
      REQUIRE(n == 1);
      if (c == '\n') return line;
      line.push_back(c);
    }
  }

 private:
  int fd_ = -1;
};

struct ServerFixture {
  InMemoryStore store;
  GatewayServer server;

  explicit ServerFixture(GatewayConfig config = {})
      : server(config, store) {
    server.start();
  }
};

std::string hex_of(std::uint8_t tag) {
  std::string hex(40, '0');
  hex[38] = "0123456789abcdef"[tag >> 4];
  hex[39] = "0123456789abcdef"[tag & 0xf];
  return hex;
}

}  // namespace

TEST_CASE("wire protocol: PUT then GET round trips") {
  ServerFixture fx;
  RawConn conn(fx.server.port());

  std::vector<std::uint8_t> value{0x01, 0x02, 0xff, 0x00, 0x7f};
  conn.send_text("PUT " + hex_of(1) + " 60 " + base64_encode(value) + "\n");
  CHECK(conn.recv_line() == "OK");

  conn.send_text("GET " + hex_of(1) + "\n");
  CHECK(conn.recv_line() == "VALUES 1");
  std::string line = conn.recv_line();
  std::size_t space = line.find(' ');
  REQUIRE(space != std::string::npos);
  long remaining = std::stol(line.substr(0, space));
  CHECK(remaining >= 58);
  CHECK(remaining <= 60);
  CHECK(base64_decode(line.substr(space + 1)) == value);
}

TEST_CASE("wire protocol: GET of an unknown key lists zero values") {
  ServerFixture fx;
  RawConn conn(fx.server.port());
  conn.send_text("GET " + hex_of(9) + "\n");
  CHECK(conn.recv_line() == "VALUES 0");
}

TEST_CASE("wire protocol: errors are in-band and non-fatal") {
  ServerFixture fx;
  RawConn conn(fx.server.port());

  conn.send_text("FETCH " + hex_of(1) + "\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  conn.send_text("PUT nothex 60 QUJD\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  conn.send_text("PUT " + hex_of(1) + " 0 QUJD\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  conn.send_text("PUT " + hex_of(1) + " -5 QUJD\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  conn.send_text("PUT " + hex_of(1) + " 60 !!!!\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  conn.send_text("GET " + hex_of(1) + " extra\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  conn.send_text("\n");
  CHECK(conn.recv_line().starts_with("ERR 400"));

  // oversize decoded value
  std::vector<std::uint8_t> big(max_value_octets + 1, 0xab);
  conn.send_text("PUT " + hex_of(1) + " 60 " + base64_encode(big) + "\n");
  CHECK(conn.recv_line().starts_with("ERR 413"));

  // the connection still works afterwards
  conn.send_text("PUT " + hex_of(1) + " 60 QUJD\n");
  CHECK(conn.recv_line() == "OK");
}

TEST_CASE("wire protocol: oversize request lines are drained") {
  GatewayConfig config;
  config.max_request_octets = 256;
  ServerFixture fx(config);
  RawConn conn(fx.server.port());

  conn.send_text("PUT " + hex_of(1) + " 60 " + std::string(5000, 'A') + "\n");
  CHECK(conn.recv_line().starts_with("ERR 413"));

  conn.send_text("PUT " + hex_of(1) + " 60 QUJD\n");
  CHECK(conn.recv_line() == "OK");
}

TEST_CASE("wire protocol: CRLF line endings are tolerated") {
  ServerFixture fx;
  RawConn conn(fx.server.port());
  conn.send_text("PUT " + hex_of(1) + " 60 QUJD\r\n");
  CHECK(conn.recv_line() == "OK");
}

TEST_CASE("client round trips values bit-exactly") {
  ServerFixture fx;
  GatewayClient client(fx.server.address(), 8);

  std::mt19937_64 rng(5150);
  for (int i = 0; i < 50; ++i) {
    Identifier key = ts::random_identifier(rng);
    std::vector<std::uint8_t> value(rng() % 600);
    for (auto& octet : value) octet = static_cast<std::uint8_t>(rng());
    client.put(key, value, 60s);
    auto records = client.get(key);
    REQUIRE(records.size() == 1);
    CHECK(records[0].value == value);
    CHECK(records[0].remaining_ttl > 58s);
    CHECK(records[0].remaining_ttl <= 60s);
  }
}

TEST_CASE("client maps protocol errors to backend errors") {
  ServerFixture fx;
  GatewayClient client(fx.server.address(), 4);
  std::vector<std::uint8_t> big(max_value_octets + 1, 0x11);
  CHECK_THROWS_AS(client.put(Identifier{}, big, 60s), ValueTooLarge);
  CHECK_THROWS_AS(client.put(Identifier{}, std::vector<std::uint8_t>{0x01}, 0s), BackendError);
  CHECK_THROWS_AS(client.advance(1s), UnsupportedOperation);
}

TEST_CASE("degenerate server limits are rejected") {
  InMemoryStore store;
  GatewayConfig config;
  config.max_connections = 0;
  GatewayServer server(config, store);
  CHECK_THROWS_AS(server.start(), Error);
}

TEST_CASE("client reports an unreachable gateway") {
  ServerFixture fx;
  std::uint16_t dead_port = fx.server.port();
  fx.server.stop();
  GatewayClient client(HostAddress{"127.0.0.1", dead_port}, 4);
  CHECK_THROWS_AS(client.put(Identifier{}, std::vector<std::uint8_t>{0x01}, 60s), BackendUnreachable);
}

TEST_CASE("windowed batch puts all become readable") {
  ServerFixture fx;
  GatewayClient client(fx.server.address(), 100);

  std::mt19937_64 rng(99);
  std::vector<PutOp> ops;
  std::vector<Identifier> keys;
  for (int i = 0; i < 1000; ++i) {
    Identifier key = ts::random_identifier(rng);
    keys.push_back(key);
    ops.push_back(PutOp{key, {static_cast<std::uint8_t>(i & 0xff)}, 600s});
  }
  BatchResult result = client.batch_put(ops, 100);
  CHECK(result.completed == 1000);

  std::size_t readable = 0;
  for (const Identifier& key : keys) {
    readable += client.get(key).size();
  }
  CHECK(readable == 1000);
}

TEST_CASE("stopping the gateway mid-batch reports partial completion") {
  auto fx = std::make_unique<ServerFixture>();
  GatewayClient client(fx->server.address(), 4);

  std::vector<PutOp> ops;
  for (int i = 0; i < 20000; ++i) {
    ops.push_back(PutOp{Identifier{}, {0x01}, 60s});
  }
  std::thread stopper([&fx] {
    std::this_thread::sleep_for(30ms);
    fx->server.stop();
  });
  try {
    BatchResult result = client.batch_put(ops, 4);
    // a very fast machine could finish first; then nothing was lost
    CHECK(result.completed == ops.size());
  } catch (const BatchPutError& e) {
    CHECK(e.completed() < ops.size());
  }
  stopper.join();
}

TEST_CASE("connection admission respects max_connections") {
  GatewayConfig config;
  config.max_connections = 2;
  ServerFixture fx(config);

  RawConn first(fx.server.port());
  RawConn second(fx.server.port());
  first.send_text("GET " + hex_of(1) + "\n");
  CHECK(first.recv_line() == "VALUES 0");
  second.send_text("GET " + hex_of(1) + "\n");
  CHECK(second.recv_line() == "VALUES 0");

  // a third connection is queued, not served, until a slot frees up
  RawConn third(fx.server.port());
  third.send_text("GET " + hex_of(2) + "\n");
  std::this_thread::sleep_for(150ms);
  first.close();
  CHECK(third.recv_line() == "VALUES 0");
}

TEST_CASE("resolver conformance through the gateway") {
  ServerFixture fx;
  GatewayClient client(fx.server.address(), 100);
  ts::run_resolution_conformance(client, 424242, 600s);
}

TEST_CASE("migration and readback through the gateway") {
  ServerFixture fx;
  GatewayClient client(fx.server.address(), 100);
  std::mt19937_64 rng(31);
  ts::check_post_migration_resolvability(client, rng, Strategy::direct, 40,
                                         600s, 100);
  ts::check_post_migration_resolvability(client, rng, Strategy::indirect, 40,
                                         600s, 100);
}

TEST_CASE("concurrent clients interleave on one store") {
  ServerFixture fx;
  constexpr int writers = 4;
  constexpr int per_writer = 50;
  Identifier shared_key;  // all-zero

  std::vector<std::thread> pool;
  for (int w = 0; w < writers; ++w) {
    pool.emplace_back([&fx, w] {
      GatewayClient client(fx.server.address(), 2);
      for (int i = 0; i < per_writer; ++i) {
        client.put(Identifier{}, std::vector<std::uint8_t>{static_cast<std::uint8_t>(w)}, 600s);
      }
    });
  }
  for (auto& t : pool) t.join();

  GatewayClient reader(fx.server.address(), 2);
  CHECK(reader.get(shared_key).size() == writers * per_writer);
}
