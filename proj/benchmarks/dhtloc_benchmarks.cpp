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

// CPU-side microbenchmarks. Simulated-backend timings here measure the
// cost of running the simulation, not the modeled network times.

#include <benchmark/benchmark.h>

#include <random>

#include "dhtloc/base64.hpp"
#include "dhtloc/bench.hpp"
#include "dhtloc/cost_model.hpp"
#include "dhtloc/dht.hpp"
#include "dhtloc/resolver.hpp"

using namespace dhtloc;
using namespace std::chrono_literals;

namespace {

Identifier seeded_id(std::mt19937_64& rng) {
  Identifier::Octets octets;
  for (auto& octet : octets) octet = static_cast<std::uint8_t>(rng());
  return Identifier(octets);
}

void BM_HexRoundTrip(benchmark::State& state) {
  std::mt19937_64 rng(1);
  Identifier id = seeded_id(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_hex(encode_hex(id)));
  }
}
BENCHMARK(BM_HexRoundTrip);

void BM_EncodeEntry(benchmark::State& state) {
  Entry entry = DirectEntry{{{"203.0.113.9", 8080}, Path{"/res/1234"}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_entry(entry));
  }
}
BENCHMARK(BM_EncodeEntry);

void BM_DecodeEntry(benchmark::State& state) {
  auto bytes = encode_entry(
      Entry{DirectEntry{{{"203.0.113.9", 8080}, Path{"/res/1234"}}}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_entry(bytes));
  }
}
BENCHMARK(BM_DecodeEntry);

void BM_Base64RoundTrip(benchmark::State& state) {
  std::vector<std::uint8_t> value(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  for (auto& octet : value) octet = static_cast<std::uint8_t>(rng());
  for (auto _ : state) {
    benchmark::DoNotOptimize(base64_decode(base64_encode(value)));
  }
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Base64RoundTrip)->Arg(64)->Arg(1024);

void BM_SimulatedResolveDirect(benchmark::State& state) {
  SimulatedBackend backend{LatencyModel{}};
  std::mt19937_64 rng(3);
  Identifier id = seeded_id(rng);
  publish_direct(backend, id, {{"10.0.0.1", 8080}, Path{"/a"}}, 86400000s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve(backend, id));
  }
}
BENCHMARK(BM_SimulatedResolveDirect);

void BM_SimulatedResolveIndirect(benchmark::State& state) {
  SimulatedBackend backend{LatencyModel{}};
  std::mt19937_64 rng(4);
  Identifier host_id = seeded_id(rng);
  Identifier id = seeded_id(rng);
  publish_host(backend, host_id, {"10.0.0.1", 8080}, 86400000s);
  publish_indirect(backend, id, host_id, Path{"/a"}, 86400000s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve(backend, id));
  }
}
BENCHMARK(BM_SimulatedResolveIndirect);

void BM_SimulatedBatchPut(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<PutOp> ops;
  for (int i = 0; i < state.range(0); ++i) {
    ops.push_back(PutOp{seeded_id(rng), {0x01, 0x02, 0x03}, 60s});
  }
  for (auto _ : state) {
    SimulatedBackend backend{LatencyModel{}};
    benchmark::DoNotOptimize(backend.batch_put(ops, 100));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatedBatchPut)->Arg(100)->Arg(5000);

void BM_Recommend(benchmark::State& state) {
  CostParams params;
  params.resource_count = 5000;
  params.lookup_rate = 2.0;
  params.migration_rate = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(recommend(params));
  }
}
BENCHMARK(BM_Recommend);

}  // namespace

BENCHMARK_MAIN();
