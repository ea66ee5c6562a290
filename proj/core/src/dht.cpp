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

#include "dhtloc/dht.hpp"

#include <algorithm>
#include <cmath>

namespace dhtloc {

const StoredValue* freshest(std::span<const StoredValue> records) {
  const StoredValue* best = nullptr;
  for (const StoredValue& record : records) {
    if (best == nullptr || record.remaining_ttl >= best->remaining_ttl) {
      best = &record;  // >= so the later-listed record wins ties
    }
  }
  return best;
}

void check_put(std::span<const std::uint8_t> value, Duration ttl) {
  if (ttl <= Duration::zero()) {
    throw BackendError("ttl must be positive");
  }
  if (value.size() > max_value_octets) {
    throw ValueTooLarge("value of " + std::to_string(value.size()) +
                        " octets exceeds limit of " +
                        std::to_string(max_value_octets));
  }
}

namespace {

// Drops expired records under one key so long-running simulations do not
// accumulate unbounded history. Invisible to get(): expired records can
// never reappear.
void prune_expired(std::vector<Record>& records, TimePoint now) {
  std::erase_if(records, [now](const Record& r) {
    return remaining_ttl(r, now) == Duration::zero();
  });
}

}  // namespace

SimulatedBackend::SimulatedBackend(LatencyModel model)
    : model_(model), rng_(model.seed) {
  if (model_.get_spacing < Duration::zero() ||
      model_.put_spacing < Duration::zero() ||
      model_.get_latency < Duration::zero() ||
      model_.put_latency < Duration::zero() || model_.jitter < 0.0) {
    throw BackendError("latency model constants must be non-negative");
  }
}

Duration SimulatedBackend::jittered(Duration base) {
  if (model_.jitter == 0.0) return base;
  // Uniform in [1 - j, 1 + j] from the top 53 bits of one draw; kept
  // explicit so the stream is identical across standard libraries.
  double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  double factor = 1.0 - model_.jitter + 2.0 * model_.jitter * unit;
  return Duration(
      static_cast<Duration::rep>(std::llround(base.count() * factor)));
}

void SimulatedBackend::store(const Identifier& key,
                             std::span<const std::uint8_t> value, Duration ttl,
                             TimePoint at) {
  std::vector<Record>& records = table_[key];
  prune_expired(records, at);
  records.push_back(
      Record{std::vector<std::uint8_t>(value.begin(), value.end()), at, ttl});
}

void SimulatedBackend::put(const Identifier& key,
                           std::span<const std::uint8_t> value, Duration ttl) {
  check_put(value, ttl);
  TimePoint issued = std::max(clock_, pipeline_free_) + jittered(model_.put_spacing);
  TimePoint done = issued + jittered(model_.put_latency);
  pipeline_free_ = issued;
  store(key, value, ttl, issued);
  clock_ = done;  // dependent call: the caller waits for the acknowledgement
}

std::vector<StoredValue> SimulatedBackend::get(const Identifier& key) {
  TimePoint issued = std::max(clock_, pipeline_free_) + jittered(model_.get_spacing);
  TimePoint done = issued + jittered(model_.get_latency);
  pipeline_free_ = issued;
  clock_ = done;

  std::vector<StoredValue> out;
  auto it = table_.find(key);
  if (it == table_.end()) return out;
  for (const Record& record : it->second) {
    Duration remaining = remaining_ttl(record, issued);
    if (remaining > Duration::zero()) {
      out.push_back(StoredValue{record.value, remaining});
    }
  }
  return out;
}

BatchResult SimulatedBackend::batch_put(std::span<const PutOp> ops,
                                        std::size_t window) {
  if (window == 0) throw BackendError("window must be at least 1");

  TimePoint start = clock_;
  if (ops.empty()) {
    // Degenerate batch: nothing to send, one acknowledgement latency.
    Duration elapsed = jittered(model_.put_latency);
    clock_ = start + elapsed;
    return BatchResult{0, elapsed};
  }

  // Sends are serialized with put_spacing between them; each op completes
  // one put_latency after its send. At most `window` ops may be sent and
  // not yet acknowledged, so the i-th send also waits for the completion of
  // the op `window` places back. With window * put_spacing >= put_latency
  // the pipeline never stalls and the batch takes n*c_p + c_q.
  std::deque<TimePoint> in_flight;  // completion times of unacknowledged ops
  TimePoint sent = std::max(clock_, pipeline_free_);
  TimePoint last_done = start;
  std::size_t completed = 0;
  for (const PutOp& op : ops) {
    try {
      check_put(op.value, op.ttl);
    } catch (const BackendError& e) {
      pipeline_free_ = sent;
      clock_ = std::max(clock_, last_done);
      throw BatchPutError(e.what(), completed);
    }
    sent += jittered(model_.put_spacing);
    if (in_flight.size() == window) {
      sent = std::max(sent, in_flight.front());
      in_flight.pop_front();
    }
    TimePoint done = sent + jittered(model_.put_latency);
    in_flight.push_back(done);
    store(op.key, op.value, op.ttl, sent);
    last_done = std::max(last_done, done);
    ++completed;
  }
  pipeline_free_ = sent;
  clock_ = last_done;
  return BatchResult{completed, last_done - start};
}

void SimulatedBackend::advance(Duration d) {
  if (d < Duration::zero()) throw BackendError("cannot advance backwards");
  clock_ += d;
}

InMemoryStore::InMemoryStore() : epoch_(std::chrono::steady_clock::now()) {}

TimePoint InMemoryStore::now() {
  return std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() -
                                              epoch_);
}

void InMemoryStore::put(const Identifier& key,
                        std::span<const std::uint8_t> value, Duration ttl) {
  check_put(value, ttl);
  TimePoint at = now();
  std::lock_guard lock(mutex_);
  std::vector<Record>& records = table_[key];
  prune_expired(records, at);
  records.push_back(
      Record{std::vector<std::uint8_t>(value.begin(), value.end()), at, ttl});
}

std::vector<StoredValue> InMemoryStore::get(const Identifier& key) {
  TimePoint at = now();
  std::lock_guard lock(mutex_);
  std::vector<StoredValue> out;
  auto it = table_.find(key);
  if (it == table_.end()) return out;
  for (const Record& record : it->second) {
    Duration remaining = remaining_ttl(record, at);
    if (remaining > Duration::zero()) {
      out.push_back(StoredValue{record.value, remaining});
    }
  }
  return out;
}

BatchResult InMemoryStore::batch_put(std::span<const PutOp> ops,
                                     std::size_t window) {
  if (window == 0) throw BackendError("window must be at least 1");
  TimePoint start = now();
  std::size_t completed = 0;
  for (const PutOp& op : ops) {
    try {
      put(op.key, op.value, op.ttl);
    } catch (const BackendError& e) {
      throw BatchPutError(e.what(), completed);
    }
    ++completed;
  }
  return BatchResult{completed, now() - start};
}

void InMemoryStore::advance(Duration) {
  throw UnsupportedOperation("advance() requires a virtual clock backend");
}

}  // namespace dhtloc
