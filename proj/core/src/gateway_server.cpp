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

#include <sys/socket.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <vector>

#include "dhtloc/base64.hpp"
#include "dhtloc/gateway.hpp"
#include "net.hpp"

namespace dhtloc {

namespace {

std::string error_line(int code, std::string message) {
  // Responses are line-framed; never let a message break that.
  std::replace(message.begin(), message.end(), '\n', ' ');
  std::replace(message.begin(), message.end(), '\r', ' ');
  return "ERR " + std::to_string(code) + " " + message + "\n";
}

std::string_view next_token(std::string_view& rest) {
  std::size_t space = rest.find(' ');
  std::string_view token = rest.substr(0, space);
  rest = space == std::string_view::npos ? std::string_view{}
                                         : rest.substr(space + 1);
  return token;
}

// Largest TTL that still converts to nanoseconds without overflow.
constexpr std::uint64_t max_ttl_seconds = 9'000'000'000;

std::string handle_request(std::string_view line, DhtBackend& store) {
  std::string_view rest = line;
  std::string_view verb = next_token(rest);
  try {
    if (verb == "PUT") {
      std::string_view key_text = next_token(rest);
      std::string_view ttl_text = next_token(rest);
      Identifier key;
      try {
        key = decode_hex(key_text);
      } catch (const HexError& e) {
        return error_line(err_malformed, e.what());
      }
      if (ttl_text.empty() || ttl_text.size() > 10 ||
          !std::all_of(ttl_text.begin(), ttl_text.end(),
                       [](char c) { return c >= '0' && c <= '9'; })) {
        return error_line(err_malformed, "ttl must be a positive integer");
      }
      std::uint64_t ttl_seconds = 0;
      for (char c : ttl_text) ttl_seconds = ttl_seconds * 10 + (c - '0');
      if (ttl_seconds == 0 || ttl_seconds > max_ttl_seconds) {
        return error_line(err_malformed, "ttl out of range");
      }
      std::vector<std::uint8_t> value;
      try {
        value = base64_decode(rest);
      } catch (const ParseError& e) {
        return error_line(err_malformed, e.what());
      }
      if (value.size() > max_value_octets) {
        return error_line(err_oversize,
                          "value exceeds " + std::to_string(max_value_octets) +
                              " octets");
      }
      store.put(key, value, std::chrono::seconds(ttl_seconds));
      return "OK\n";
    }
    if (verb == "GET") {
      std::string_view key_text = next_token(rest);
      if (!rest.empty()) {
        return error_line(err_malformed, "GET takes exactly one argument");
      }
      Identifier key;
      try {
        key = decode_hex(key_text);
      } catch (const HexError& e) {
        return error_line(err_malformed, e.what());
      }
      std::vector<StoredValue> records = store.get(key);
      std::string response = "VALUES " + std::to_string(records.size()) + "\n";
      for (const StoredValue& record : records) {
        auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
            record.remaining_ttl);
        response += std::to_string(seconds.count()) + " " +
                    base64_encode(record.value) + "\n";
      }
      return response;
    }
    return error_line(err_malformed,
                      "unknown verb \"" + std::string(verb) + "\"");
  } catch (const ValueTooLarge& e) {
    return error_line(err_oversize, e.what());
  } catch (const std::exception& e) {
    return error_line(err_internal, e.what());
  }
}

}  // namespace

struct GatewayServer::Impl {
  GatewayConfig config;
  DhtBackend& store;
  net::Socket listener;
  std::uint16_t bound_port = 0;
  std::thread accept_thread;
  std::atomic<bool> running{false};

  // Handler threads park their own handle in `retired` on exit; the accept
  // loop and stop() join from there. `idle` is signalled on every exit.
  std::mutex mutex;
  std::condition_variable idle;
  std::unordered_map<int, std::thread> handlers;  // keyed by connection fd
  std::vector<std::thread> retired;

  Impl(GatewayConfig cfg, DhtBackend& backend)
      : config(cfg), store(backend) {}

  void reap_retired() {
    std::vector<std::thread> done;
    {
      std::lock_guard lock(mutex);
      done.swap(retired);
    }
    for (std::thread& t : done) t.join();
  }

  void accept_loop() {
    while (running.load()) {
      {
        std::unique_lock lock(mutex);
        idle.wait(lock, [this] {
          return !running.load() || handlers.size() < config.max_connections;
        });
      }
      if (!running.load()) return;
      reap_retired();
      int fd = ::accept(listener.fd(), nullptr, nullptr);
      if (fd < 0) {
        if (!running.load()) return;
        continue;
      }
      // Insert the handle before releasing the lock: the handler blocks on
      // this mutex at exit, so it cannot retire before it is registered.
      std::lock_guard lock(mutex);
      handlers.emplace(fd, std::thread(&Impl::handle_connection, this, fd));
    }
  }

  void handle_connection(int fd) {
    net::Socket sock(fd);
    net::LineReader reader(fd, config.max_request_octets);
    try {
      for (;;) {
        std::optional<std::string> line;
        try {
          line = reader.read_line();
        } catch (const net::LineTooLong& e) {
          reader.drain_line();
          net::send_all(fd, error_line(err_oversize, e.what()));
          continue;
        }
        if (!line) break;  // client closed
        net::send_all(fd, handle_request(*line, store));
      }
    } catch (const std::exception&) {
      // IO failure or shutdown; just drop the connection.
    }
    std::lock_guard lock(mutex);
    auto self = handlers.extract(fd);
    if (!self.empty()) retired.push_back(std::move(self.mapped()));
    idle.notify_all();
  }

  void stop() {
    if (!running.exchange(false)) return;
    // Closing the listener kicks accept(); shutting down live connections
    // kicks their blocked reads.
    if (listener.valid()) ::shutdown(listener.fd(), SHUT_RDWR);
    listener.close();
    {
      std::lock_guard lock(mutex);
      for (auto& [fd, thread] : handlers) ::shutdown(fd, SHUT_RDWR);
      idle.notify_all();
    }
    if (accept_thread.joinable()) accept_thread.join();
    {
      std::unique_lock lock(mutex);
      idle.wait(lock, [this] { return handlers.empty(); });
    }
    reap_retired();
  }
};

GatewayServer::GatewayServer(GatewayConfig config, DhtBackend& store)
    : impl_(std::make_unique<Impl>(config, store)) {}

GatewayServer::~GatewayServer() {
  if (impl_) impl_->stop();
}

void GatewayServer::start() {
  if (impl_->running.load()) throw Error("gateway already running");
  if (impl_->config.max_connections == 0 ||
      impl_->config.max_request_octets == 0) {
    throw Error("gateway limits must be positive");
  }
  auto [socket, port] =
      net::listen_on(impl_->config.listen.host, impl_->config.listen.port,
                     static_cast<int>(impl_->config.max_connections) + 16);
  impl_->listener = std::move(socket);
  impl_->bound_port = port;
  impl_->running.store(true);
  impl_->accept_thread = std::thread(&Impl::accept_loop, impl_.get());
}

void GatewayServer::stop() { impl_->stop(); }

std::uint16_t GatewayServer::port() const { return impl_->bound_port; }

HostAddress GatewayServer::address() const {
  return HostAddress{impl_->config.listen.host, impl_->bound_port};
}

}  // namespace dhtloc
