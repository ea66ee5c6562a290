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

#include "dhtloc/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "dhtloc/gateway.hpp"

namespace dhtloc {

namespace {

// splitmix64 finalizer; decorrelates per-cell seeds from the user seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

double to_ms(Duration d) { return static_cast<double>(d.count()) / 1e6; }

Path numbered_path(std::size_t i) {
  return Path{"/res/" + std::to_string(i)};
}

HostProfile make_profile(EntropySource& entropy, Strategy strategy,
                         const HostAddress& address, std::size_t resources) {
  HostProfile profile;
  profile.host_id = generate_identifier(entropy);
  profile.address = address;
  profile.strategy = strategy;
  profile.resources.reserve(resources);
  for (std::size_t i = 0; i < resources; ++i) {
    profile.resources.push_back(
        ResourceBinding{generate_identifier(entropy), numbered_path(i)});
  }
  return profile;
}

const HostAddress address_a{"10.0.0.1", 8080};
const HostAddress address_b{"10.0.0.2", 8080};

}  // namespace

std::vector<std::size_t> default_resource_sweep() {
  std::vector<std::size_t> sweep{1};
  for (std::size_t n = 10; n <= 100; n += 10) sweep.push_back(n);
  for (std::size_t n = 200; n <= 1000; n += 100) sweep.push_back(n);
  for (std::size_t n = 2000; n <= 5000; n += 1000) sweep.push_back(n);
  return sweep;
}

StatSummary summarize(std::span<const Duration> samples) {
  StatSummary summary;
  summary.trials = samples.size();
  if (samples.empty()) return summary;

  Duration min = samples[0];
  Duration max = samples[0];
  double sum_ms = 0.0;
  for (Duration sample : samples) {
    min = std::min(min, sample);
    max = std::max(max, sample);
    sum_ms += to_ms(sample);
  }
  summary.mean_ms = sum_ms / static_cast<double>(samples.size());
  summary.min_ms = to_ms(min);
  summary.max_ms = to_ms(max);
  if (samples.size() >= 2) {
    double squares = 0.0;
    for (Duration sample : samples) {
      double delta = to_ms(sample) - summary.mean_ms;
      squares += delta * delta;
    }
    summary.stddev_ms =
        std::sqrt(squares / static_cast<double>(samples.size() - 1));
  }
  return summary;
}

BackendFactory simulated_factory(const LatencyModel& model) {
  return [model](std::uint64_t seed) {
    LatencyModel cell = model;
    cell.seed = seed;
    return std::make_unique<SimulatedBackend>(cell);
  };
}

BackendFactory gateway_factory(const HostAddress& gateway,
                               std::size_t window) {
  return [gateway, window](std::uint64_t) {
    return std::make_unique<GatewayClient>(gateway, window);
  };
}

LookupExperimentResult run_lookup_experiment(const ExperimentSpec& spec,
                                             const BackendFactory& factory) {
  if (spec.entry_count == 0 || spec.lookup_trials == 0) {
    throw BenchError("entry_count and lookup_trials must be positive");
  }
  std::unique_ptr<DhtBackend> backend = factory(mix_seed(spec.seed, 0x10));
  SeededEntropy entropy(mix_seed(spec.seed, 0x11));
  std::mt19937_64 pick(mix_seed(spec.seed, 0x12));

  HostProfile direct_host =
      make_profile(entropy, Strategy::direct, address_a, spec.entry_count);
  HostProfile indirect_host =
      make_profile(entropy, Strategy::indirect, address_a, spec.entry_count);
  publish_profile(*backend, direct_host, spec.ttl, spec.window);
  publish_profile(*backend, indirect_host, spec.ttl, spec.window);

  auto run_trials = [&](const HostProfile& host) {
    std::vector<Duration> samples;
    samples.reserve(spec.lookup_trials);
    std::size_t failures = 0;
    for (std::size_t t = 0; t < spec.lookup_trials; ++t) {
      const ResourceBinding& resource =
          host.resources[pick() % host.resources.size()];
      TimePoint before = backend->now();
      ResolveResult result = resolve(*backend, resource.id);
      samples.push_back(backend->now() - before);
      bool correct = result &&
                     result.location->address == host.address &&
                     result.location->path == resource.path;
      if (!correct) ++failures;
    }
    if (failures > 0) {
      throw BenchError(std::to_string(failures) + " of " +
                       std::to_string(spec.lookup_trials) +
                       " lookups failed or returned a wrong location");
    }
    return summarize(samples);
  };

  LookupExperimentResult result;
  result.direct = run_trials(direct_host);
  result.indirect = run_trials(indirect_host);
  return result;
}

std::vector<MigrationRow> run_migration_experiment(
    const ExperimentSpec& spec, const BackendFactory& factory) {
  if (spec.migration_trials == 0) {
    throw BenchError("migration_trials must be positive");
  }
  if (spec.resource_sweep.empty()) {
    throw BenchError("resource sweep must be non-empty");
  }
  for (std::size_t i = 0; i + 1 < spec.resource_sweep.size(); ++i) {
    if (spec.resource_sweep[i] > spec.resource_sweep[i + 1]) {
      throw BenchError("resource sweep must be sorted");
    }
  }
  if (spec.resource_sweep.front() == 0) {
    throw BenchError("resource sweep values must be positive");
  }

  std::vector<MigrationRow> rows;
  rows.reserve(spec.resource_sweep.size() * 2);
  for (std::size_t n : spec.resource_sweep) {
    for (Strategy strategy : {Strategy::direct, Strategy::indirect}) {
      std::uint64_t tag =
          mix_seed(n, strategy == Strategy::direct ? 0x20 : 0x21);
      std::unique_ptr<DhtBackend> backend =
          factory(mix_seed(spec.seed, tag));
      SeededEntropy entropy(mix_seed(spec.seed, tag + 1));

      HostProfile profile = make_profile(entropy, strategy, address_a, n);
      publish_profile(*backend, profile, spec.ttl, spec.window);

      std::vector<Duration> samples;
      samples.reserve(spec.migration_trials);
      for (std::size_t trial = 0; trial < spec.migration_trials; ++trial) {
        const HostAddress& target =
            trial % 2 == 0 ? address_b : address_a;
        MigrateResult moved =
            migrate(*backend, profile, target, spec.ttl, spec.window);
        samples.push_back(moved.elapsed);
      }
      rows.push_back(MigrationRow{n, strategy, summarize(samples)});
    }
  }
  return rows;
}

std::vector<CsvRow> to_csv_rows(const LookupExperimentResult& result,
                                const ExperimentSpec& spec,
                                const std::string& backend_name) {
  auto row = [&](Strategy strategy, const StatSummary& stats) {
    return CsvRow{"lookup",        backend_name,   to_string(strategy),
                  spec.entry_count, stats.trials,  stats.mean_ms,
                  stats.stddev_ms, stats.min_ms,   stats.max_ms,
                  spec.seed};
  };
  return {row(Strategy::direct, result.direct),
          row(Strategy::indirect, result.indirect)};
}

std::vector<CsvRow> to_csv_rows(std::span<const MigrationRow> rows,
                                const ExperimentSpec& spec,
                                const std::string& backend_name) {
  std::vector<CsvRow> out;
  out.reserve(rows.size());
  for (const MigrationRow& row : rows) {
    out.push_back(CsvRow{"migration", backend_name, to_string(row.strategy),
                         row.resources, row.stats.trials, row.stats.mean_ms,
                         row.stats.stddev_ms, row.stats.min_ms,
                         row.stats.max_ms, spec.seed});
  }
  return out;
}

void emit_csv(std::span<const CsvRow> rows, std::ostream& out) {
  out << "experiment,backend,strategy,n,trials,mean_ms,stddev_ms,min_ms,"
         "max_ms,seed\n";
  char buffer[128];
  for (const CsvRow& row : rows) {
    out << row.experiment << ',' << row.backend << ',' << row.strategy << ','
        << row.n << ',' << row.trials << ',';
    std::snprintf(buffer, sizeof(buffer), "%.6f,%.6f,%.6f,%.6f", row.mean_ms,
                  row.stddev_ms, row.min_ms, row.max_ms);
    out << buffer << ',' << row.seed << '\n';
  }
}

void emit_csv(std::span<const CsvRow> rows,
              const std::filesystem::path& destination) {
  std::ofstream file(destination, std::ios::trunc);
  if (!file) throw Error("cannot open " + destination.string());
  emit_csv(rows, file);
  if (!file.flush()) throw Error("failed writing " + destination.string());
}

}  // namespace dhtloc
