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

#include <atomic>
#include <charconv>
#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

#include "dhtloc/base64.hpp"
#include "dhtloc/gateway.hpp"
#include "net.hpp"

namespace dhtloc {

namespace {

constexpr std::size_t max_response_line = 1 << 16;

Duration ceil_to_seconds(Duration ttl) {
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(ttl);
  if (secs < ttl) secs += std::chrono::seconds(1);
  return secs;
}

std::string put_line(const Identifier& key, std::span<const std::uint8_t> value,
                     Duration ttl) {
  auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(ceil_to_seconds(ttl));
  return "PUT " + encode_hex(key) + " " + std::to_string(secs.count()) + " " +
         base64_encode(value) + "\n";
}

// One connection speaking the request/response protocol.
class Connection {
 public:
  explicit Connection(const HostAddress& gateway)
      : socket_(net::connect_to(gateway.host, gateway.port)),
        reader_(socket_.fd(), max_response_line) {}

  std::string round_trip(const std::string& request) {
    net::send_all(socket_.fd(), request);
    std::optional<std::string> line = reader_.read_line();
    if (!line) throw net::IoError("gateway closed the connection");
    return *line;
  }

  std::string read_line() {
    std::optional<std::string> line = reader_.read_line();
    if (!line) throw net::IoError("gateway closed the connection");
    return *line;
  }

 private:
  net::Socket socket_;
  net::LineReader reader_;
};

[[noreturn]] void throw_response_error(const std::string& line) {
  std::string_view rest = line;
  if (rest.starts_with("ERR ")) {
    rest.remove_prefix(4);
    std::size_t space = rest.find(' ');
    std::string_view code = rest.substr(0, space);
    std::string message(space == std::string_view::npos
                            ? std::string_view{}
                            : rest.substr(space + 1));
    if (code == "413") throw ValueTooLarge(message);
    throw BackendError("gateway error " + std::string(code) + ": " + message);
  }
  throw BackendError("unexpected gateway response \"" + line + "\"");
}

void run_put(Connection& conn, const PutOp& op) {
  check_put(op.value, op.ttl);
  std::string response = conn.round_trip(put_line(op.key, op.value, op.ttl));
  if (response != "OK") throw_response_error(response);
}

}  // namespace

struct GatewayClient::Impl {
  HostAddress gateway;
  std::size_t window;
  std::chrono::steady_clock::time_point epoch =
      std::chrono::steady_clock::now();

  // Serialized persistent connection for put/get; rebuilt after failures.
  std::mutex mutex;
  std::unique_ptr<Connection> conn;

  Connection& connection() {
    if (!conn) conn = std::make_unique<Connection>(gateway);
    return *conn;
  }

  template <typename Fn>
  auto with_connection(Fn&& fn) {
    std::lock_guard lock(mutex);
    try {
      return fn(connection());
    } catch (const net::IoError& e) {
      conn.reset();
      throw BackendUnreachable(e.what());
    }
  }
};

GatewayClient::GatewayClient(HostAddress gateway, std::size_t window)
    : impl_(std::make_unique<Impl>()) {
  validate_address(gateway);
  if (window == 0) throw BackendError("window must be at least 1");
  impl_->gateway = std::move(gateway);
  impl_->window = window;
}

GatewayClient::~GatewayClient() = default;

std::size_t GatewayClient::window() const { return impl_->window; }

void GatewayClient::put(const Identifier& key,
                        std::span<const std::uint8_t> value, Duration ttl) {
  check_put(value, ttl);
  impl_->with_connection([&](Connection& conn) {
    std::string response = conn.round_trip(put_line(key, value, ttl));
    if (response != "OK") throw_response_error(response);
    return 0;
  });
}

std::vector<StoredValue> GatewayClient::get(const Identifier& key) {
  return impl_->with_connection([&](Connection& conn) {
    std::string header = conn.round_trip("GET " + encode_hex(key) + "\n");
    if (!header.starts_with("VALUES ")) throw_response_error(header);
    std::size_t count = 0;
    std::string_view count_text = std::string_view(header).substr(7);
    auto [end, ec] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc{} || end != count_text.data() + count_text.size()) {
      throw BackendError("bad VALUES header \"" + header + "\"");
    }
    std::vector<StoredValue> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::string line = conn.read_line();
      std::size_t space = line.find(' ');
      if (space == std::string::npos) {
        throw BackendError("bad value line \"" + line + "\"");
      }
      std::uint64_t seconds = 0;
      auto [sec_end, sec_ec] =
          std::from_chars(line.data(), line.data() + space, seconds);
      if (sec_ec != std::errc{} || sec_end != line.data() + space) {
        throw BackendError("bad remaining ttl in \"" + line + "\"");
      }
      std::vector<std::uint8_t> value;
      try {
        value = base64_decode(std::string_view(line).substr(space + 1));
      } catch (const ParseError& e) {
        throw BackendError(std::string("bad value line: ") + e.what());
      }
      records.push_back(StoredValue{std::move(value),
                                    std::chrono::seconds(seconds)});
    }
    return records;
  });
}

BatchResult GatewayClient::batch_put(std::span<const PutOp> ops,
                                     std::size_t window) {
  if (window == 0) throw BackendError("window must be at least 1");
  TimePoint start = now();
  if (ops.empty()) return BatchResult{0, now() - start};

  // Fan out over up to `window` connections, each with one request in
  // flight; workers pull the next op off a shared cursor.
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    std::unique_ptr<Connection> conn;
    while (!failed.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= ops.size()) return;
      try {
        if (!conn) conn = std::make_unique<Connection>(impl_->gateway);
        run_put(*conn, ops[i]);
        completed.fetch_add(1);
      } catch (const std::exception& e) {
        bool expected = false;
        if (failed.compare_exchange_strong(expected, true)) {
          std::lock_guard lock(error_mutex);
          first_error = e.what();
        }
        return;
      }
    }
  };

  std::size_t threads = std::min(window, ops.size());
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  if (failed.load()) {
    throw BatchPutError("batch put aborted: " + first_error, completed.load());
  }
  return BatchResult{completed.load(), now() - start};
}

TimePoint GatewayClient::now() {
  return std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() -
                                              impl_->epoch);
}

void GatewayClient::advance(Duration) {
  throw UnsupportedOperation("advance() requires a virtual clock backend");
}

}  // namespace dhtloc
