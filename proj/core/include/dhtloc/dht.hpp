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

#ifndef DHTLOC_DHT_HPP
#define DHTLOC_DHT_HPP

#include <chrono>
#include <cstdint>
#include <deque>
#include <mutex>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "dhtloc/error.hpp"
#include "dhtloc/identifier.hpp"

namespace dhtloc {

using Duration = std::chrono::nanoseconds;
// Nanoseconds since the backend's epoch (0 for the simulated virtual clock,
// construction time for wall-clock backends).
using TimePoint = std::chrono::nanoseconds;

/// Values larger than this are rejected; the table stores locators, not
/// blobs.
inline constexpr std::size_t max_value_octets = 1024;

/// Fixed TTL used when callers do not choose one.
inline constexpr Duration default_ttl = std::chrono::seconds(3600);

class BackendError : public Error {
 public:
  using Error::Error;
};

/// put() value exceeded max_value_octets.
class ValueTooLarge : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Network-backed client could not reach its gateway.
class BackendUnreachable : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Operation not available on this backend (e.g. advance() on wall clocks).
class UnsupportedOperation : public BackendError {
 public:
  using BackendError::BackendError;
};

/// A batch_put aborted: completed() ops were applied before the failure.
class BatchPutError : public BackendError {
 public:
  BatchPutError(const std::string& message, std::size_t completed)
      : BackendError(message), completed_(completed) {}

  std::size_t completed() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

/// One stored value under a key.
struct Record {
  std::vector<std::uint8_t> value;
  TimePoint inserted_at;
  Duration ttl;
};

/// remaining = ttl - (now - inserted_at), clamped at zero. The record is
/// visible to get only while this is positive.
constexpr Duration remaining_ttl(const Record& record, TimePoint now) {
  Duration elapsed = now - record.inserted_at;
  if (elapsed >= record.ttl) return Duration::zero();
  return record.ttl - elapsed;
}

/// get() result element.
struct StoredValue {
  std::vector<std::uint8_t> value;
  Duration remaining_ttl;

  friend bool operator==(const StoredValue&, const StoredValue&) = default;
};

/// Picks the value with the greatest remaining TTL; ties go to the
/// later-listed record. Returns nullptr for an empty list.
const StoredValue* freshest(std::span<const StoredValue> records);

struct PutOp {
  Identifier key;
  std::vector<std::uint8_t> value;
  Duration ttl;
};

struct BatchResult {
  std::size_t completed = 0;
  Duration elapsed = Duration::zero();
};

/// Key-value substrate contract. Multi-value: put appends, never replaces;
/// get returns every unexpired record for a key. Implementations must
/// tolerate concurrent put/get calls unless documented single-context.
class DhtBackend {
 public:
  virtual ~DhtBackend() = default;

  /// Appends a record under key. ttl must be positive; value at most
  /// max_value_octets.
  virtual void put(const Identifier& key, std::span<const std::uint8_t> value,
                   Duration ttl) = 0;

  /// All unexpired records for key, oldest first; empty if none.
  virtual std::vector<StoredValue> get(const Identifier& key) = 0;

  /// Applies ops with at most `window` requests in flight. Aborts on the
  /// first failure, throwing BatchPutError with the completed count.
  virtual BatchResult batch_put(std::span<const PutOp> ops,
                                std::size_t window) = 0;

  /// Current backend time (virtual or wall).
  virtual TimePoint now() = 0;

  /// Moves the virtual clock forward. Wall-clock backends throw
  /// UnsupportedOperation.
  virtual void advance(Duration d) = 0;
};

/// Per-operation timing constants for the simulated backend. An operation
/// occupies the issue pipeline for the spacing (get_spacing / put_spacing)
/// and completes one network latency (get_latency / put_latency) later, so a
/// dependent get costs get_spacing + get_latency and a pipelined batch of n
/// puts costs n * put_spacing + put_latency.
struct LatencyModel {
  Duration get_spacing = std::chrono::milliseconds(30);
  Duration put_spacing = std::chrono::milliseconds(50);
  Duration get_latency = std::chrono::milliseconds(200);
  Duration put_latency = std::chrono::milliseconds(500);
  /// Half-width of the multiplicative noise on each constant: every use is
  /// scaled by a uniform draw from [1 - jitter, 1 + jitter]. 0 disables.
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

/// Deterministic in-process backend driven by a virtual clock. Same seed and
/// operation sequence give identical elapsed times and record sets.
/// Single-context: not safe for concurrent use.
class SimulatedBackend final : public DhtBackend {
 public:
  explicit SimulatedBackend(LatencyModel model = {});

  void put(const Identifier& key, std::span<const std::uint8_t> value,
           Duration ttl) override;
  std::vector<StoredValue> get(const Identifier& key) override;
  BatchResult batch_put(std::span<const PutOp> ops,
                        std::size_t window) override;
  TimePoint now() override { return clock_; }
  void advance(Duration d) override;

 private:
  Duration jittered(Duration base);
  void store(const Identifier& key, std::span<const std::uint8_t> value,
             Duration ttl, TimePoint at);

  LatencyModel model_;
  std::mt19937_64 rng_;
  TimePoint clock_{0};
  TimePoint pipeline_free_{0};  // end of the last issue slot
  std::unordered_map<Identifier, std::vector<Record>, IdentifierHash> table_;
};

/// Wall-clock in-memory backend; the store behind the gateway server.
/// Operations apply immediately (no artificial latency). Thread-safe.
class InMemoryStore final : public DhtBackend {
 public:
  InMemoryStore();

  void put(const Identifier& key, std::span<const std::uint8_t> value,
           Duration ttl) override;
  std::vector<StoredValue> get(const Identifier& key) override;
  // window is a client-side concern; ops apply sequentially here.
  BatchResult batch_put(std::span<const PutOp> ops,
                        std::size_t window) override;
  TimePoint now() override;
  void advance(Duration d) override;

 private:
  std::chrono::steady_clock::time_point epoch_;
  std::mutex mutex_;
  std::unordered_map<Identifier, std::vector<Record>, IdentifierHash> table_;
};

/// Validates a put against the common preconditions.
void check_put(std::span<const std::uint8_t> value, Duration ttl);

}  // namespace dhtloc

#endif  // DHTLOC_DHT_HPP
