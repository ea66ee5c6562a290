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

#ifndef DHTLOC_BENCH_HPP
#define DHTLOC_BENCH_HPP

#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dhtloc/dht.hpp"
#include "dhtloc/resolver.hpp"

namespace dhtloc {

class BenchError : public Error {
 public:
  using Error::Error;
};

/// Sweep shape behind the migration experiment defaults: 1, 10..100 by 10,
/// 200..1000 by 100, 2000..5000 by 1000.
std::vector<std::size_t> default_resource_sweep();

/// Experiment parameters. Identical spec and seed give identical results on
/// the simulated backend, byte for byte in the emitted CSV.
struct ExperimentSpec {
  LatencyModel latency;  // simulated backend timing (seed field unused here)
  std::size_t entry_count = 5000;
  std::size_t lookup_trials = 2000;
  std::size_t migration_trials = 100;
  std::vector<std::size_t> resource_sweep = default_resource_sweep();
  std::size_t window = 100;
  std::uint64_t seed = 0;
  Duration ttl = default_ttl;
};

struct StatSummary {
  double mean_ms = 0.0;
  double stddev_ms = 0.0;  // sample standard deviation; 0 for < 2 trials
  double min_ms = 0.0;
  double max_ms = 0.0;
  std::size_t trials = 0;
};

StatSummary summarize(std::span<const Duration> samples);

/// Makes one backend per experiment cell; the seed argument is already
/// mixed per cell so simulated runs are independent and reproducible.
using BackendFactory =
    std::function<std::unique_ptr<DhtBackend>(std::uint64_t seed)>;

/// Cells get a SimulatedBackend with the given constants and the per-cell
/// seed.
BackendFactory simulated_factory(const LatencyModel& model);

/// Cells share the remote store behind one gateway; fresh random
/// identifiers keep cells from colliding.
BackendFactory gateway_factory(const HostAddress& gateway,
                               std::size_t window);

struct LookupExperimentResult {
  StatSummary direct;
  StatSummary indirect;
};

/// Publishes entry_count resources under each scheme (plus one host entry),
/// then times lookup_trials resolves of uniformly drawn published
/// identifiers per scheme. A failed or wrong resolve aborts with BenchError.
LookupExperimentResult run_lookup_experiment(const ExperimentSpec& spec,
                                             const BackendFactory& factory);

struct MigrationRow {
  std::size_t resources = 0;
  Strategy strategy = Strategy::direct;
  StatSummary stats;
};

/// For each sweep size and strategy: publish that many resources, then
/// alternate the host between two addresses migration_trials times, timing
/// each migration.
std::vector<MigrationRow> run_migration_experiment(
    const ExperimentSpec& spec, const BackendFactory& factory);

/// One output row per (experiment, strategy, n).
struct CsvRow {
  std::string experiment;
  std::string backend;
  std::string strategy;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

std::vector<CsvRow> to_csv_rows(const LookupExperimentResult& result,
                                const ExperimentSpec& spec,
                                const std::string& backend_name);
std::vector<CsvRow> to_csv_rows(std::span<const MigrationRow> rows,
                                const ExperimentSpec& spec,
                                const std::string& backend_name);

/// Header row then one line per row; durations printed as fixed-point
/// milliseconds with six decimals.
void emit_csv(std::span<const CsvRow> rows, std::ostream& out);
void emit_csv(std::span<const CsvRow> rows,
              const std::filesystem::path& destination);

}  // namespace dhtloc

#endif  // DHTLOC_BENCH_HPP
