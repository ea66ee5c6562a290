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

// dhtloc command line tool: publish/resolve/migrate against a backend,
// cost-model advice, gateway serving, and benchmark runs.
//
// Exit codes: 0 success; resolve outcomes 1 not-found, 2 dangling-host,
// 3 malformed-entry; 64 usage error; 70 backend/IO/runtime error.

#include <csignal>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "dhtloc/bench.hpp"
#include "dhtloc/cost_model.hpp"
#include "dhtloc/dht.hpp"
#include "dhtloc/gateway.hpp"
#include "dhtloc/profile.hpp"
#include "dhtloc/resolver.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_not_found = 1;
constexpr int exit_dangling_host = 2;
constexpr int exit_malformed = 3;
constexpr int exit_usage = 64;
constexpr int exit_runtime = 70;

struct BackendOptions {
  std::string backend = "simulated";
  std::uint64_t ttl_seconds = 3600;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  double get_spacing_ms = 30.0;
  double put_spacing_ms = 50.0;
  double get_latency_ms = 200.0;
  double put_latency_ms = 500.0;
  std::size_t window = 100;
};

dhtloc::Duration ms_to_duration(double ms) {
  return dhtloc::Duration(static_cast<dhtloc::Duration::rep>(ms * 1e6));
}

void add_backend_options(CLI::App* cmd, BackendOptions& opts) {
  cmd->add_option("--backend", opts.backend,
                  "\"simulated\" or \"gateway:<host:port>\"")
      ->capture_default_str();
  cmd->add_option("--ttl", opts.ttl_seconds, "record TTL in seconds")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "simulated backend RNG seed")
      ->capture_default_str();
  cmd->add_option("--jitter", opts.jitter,
                  "simulated latency noise half-width (0 disables)")
      ->capture_default_str();
  cmd->add_option("--cg", opts.get_spacing_ms, "per-get spacing, ms")
      ->capture_default_str();
  cmd->add_option("--cp", opts.put_spacing_ms, "per-put spacing, ms")
      ->capture_default_str();
  cmd->add_option("--cr", opts.get_latency_ms, "get network latency, ms")
      ->capture_default_str();
  cmd->add_option("--cq", opts.put_latency_ms, "put network latency, ms")
      ->capture_default_str();
  cmd->add_option("--window", opts.window, "batch concurrency window")
      ->capture_default_str();
}

dhtloc::LatencyModel latency_from(const BackendOptions& opts) {
  dhtloc::LatencyModel model;
  model.get_spacing = ms_to_duration(opts.get_spacing_ms);
  model.put_spacing = ms_to_duration(opts.put_spacing_ms);
  model.get_latency = ms_to_duration(opts.get_latency_ms);
  model.put_latency = ms_to_duration(opts.put_latency_ms);
  model.jitter = opts.jitter;
  model.seed = opts.seed;
  return model;
}

bool is_gateway(const BackendOptions& opts) {
  return opts.backend.starts_with("gateway:");
}

std::unique_ptr<dhtloc::DhtBackend> make_backend(const BackendOptions& opts) {
  if (opts.backend == "simulated") {
    return std::make_unique<dhtloc::SimulatedBackend>(latency_from(opts));
  }
  if (is_gateway(opts)) {
    dhtloc::HostAddress address =
        dhtloc::parse_address(std::string_view(opts.backend).substr(8));
    return std::make_unique<dhtloc::GatewayClient>(address, opts.window);
  }
  throw CLI::ValidationError(
      "--backend", "expected \"simulated\" or \"gateway:<host:port>\"");
}

dhtloc::Duration ttl_of(const BackendOptions& opts) {
  return std::chrono::seconds(opts.ttl_seconds);
}

dhtloc::Identifier pick_id(const std::string& hex) {
  if (!hex.empty()) return dhtloc::decode_hex(hex);
  dhtloc::SystemEntropy entropy;
  return dhtloc::generate_identifier(entropy);
}

volatile std::sig_atomic_t stop_requested = 0;

void handle_stop_signal(int) { stop_requested = 1; }

int run_serve(const std::string& listen, std::size_t max_conn,
              std::size_t max_request_bytes) {
  dhtloc::GatewayConfig config;
  config.listen = dhtloc::parse_address(listen);
  config.max_connections = max_conn;
  config.max_request_octets = max_request_bytes;

  dhtloc::InMemoryStore store;
  dhtloc::GatewayServer server(config, store);
  server.start();
  std::printf("listening on %s\n",
              dhtloc::format_address(server.address()).c_str());
  std::fflush(stdout);

  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  while (stop_requested == 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  server.stop();
  return exit_ok;
}

int run_advise(const dhtloc::CostParams& params, const std::string& format) {
  dhtloc::CostReport report;
  try {
    report = dhtloc::recommend(params);
  } catch (const dhtloc::Error& e) {
    // invalid parameters are a usage problem, not a runtime one
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_usage;
  }
  if (format == "csv") {
    std::printf(
        "lookup_direct_s,lookup_indirect_s,migration_direct_s,"
        "migration_indirect_s,overall_direct,overall_indirect,"
        "weighted_direct,weighted_indirect,threshold_lhs,threshold_rhs,"
        "recommendation\n");
    std::printf("%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%s\n",
                report.direct_lookup_cost, report.indirect_lookup_cost,
                report.direct_migration_cost, report.indirect_migration_cost,
                report.direct_overall, report.indirect_overall,
                report.direct_weighted, report.indirect_weighted,
                report.threshold_lhs, report.threshold_rhs,
                dhtloc::to_string(report.recommendation).c_str());
    return exit_ok;
  }
  std::printf("lookup cost      direct %.6f s, indirect %.6f s\n",
              report.direct_lookup_cost, report.indirect_lookup_cost);
  std::printf("migration cost   direct %.6f s, indirect %.6f s\n",
              report.direct_migration_cost, report.indirect_migration_cost);
  std::printf("overall cost     direct %.6f, indirect %.6f\n",
              report.direct_overall, report.indirect_overall);
  std::printf("weighted cost    direct %.6f, indirect %.6f\n",
              report.direct_weighted, report.indirect_weighted);
  std::printf("threshold        lhs %.6f vs rhs %.6f\n", report.threshold_lhs,
              report.threshold_rhs);
  std::string verdict = dhtloc::to_string(report.recommendation);
  if (report.recommendation == dhtloc::Recommendation::tie) {
    verdict += " (direct by default)";
  }
  std::printf("recommendation   %s\n", verdict.c_str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolution of random-number resource identifiers in a DHT "
               "with direct, indirect, and host entries"};
  app.require_subcommand(1);
  std::function<int()> run;

  // --- publish ---
  auto* publish = app.add_subcommand(
      "publish", "Store a direct, indirect, or host entry");
  publish->require_subcommand(1);
  BackendOptions publish_opts;
  std::string publish_id;
  std::string publish_location;
  std::string publish_host_id;
  std::string publish_path;
  std::string publish_address;

  auto* pub_direct =
      publish->add_subcommand("direct", "Store the full network location");
  add_backend_options(pub_direct, publish_opts);
  pub_direct->add_option("--id", publish_id, "reuse this 40-hex identifier");
  pub_direct
      ->add_option("--location", publish_location, "host:port/path to store")
      ->required();
  pub_direct->callback([&] {
    run = [&]() {
      auto backend = make_backend(publish_opts);
      dhtloc::Identifier id = pick_id(publish_id);
      dhtloc::publish_direct(*backend, id,
                             dhtloc::parse_location(publish_location),
                             ttl_of(publish_opts));
      std::printf("%s\n", dhtloc::encode_hex(id).c_str());
      return exit_ok;
    };
  });

  auto* pub_indirect = publish->add_subcommand(
      "indirect", "Store a host identifier plus path");
  add_backend_options(pub_indirect, publish_opts);
  pub_indirect->add_option("--id", publish_id, "reuse this 40-hex identifier");
  pub_indirect->add_option("--host-id", publish_host_id, "owning host, 40-hex")
      ->required();
  pub_indirect->add_option("--path", publish_path, "path within the host")
      ->required();
  pub_indirect->callback([&] {
    run = [&]() {
      auto backend = make_backend(publish_opts);
      dhtloc::Identifier id = pick_id(publish_id);
      dhtloc::publish_indirect(*backend, id,
                               dhtloc::decode_hex(publish_host_id),
                               dhtloc::Path{publish_path},
                               ttl_of(publish_opts));
      std::printf("%s\n", dhtloc::encode_hex(id).c_str());
      return exit_ok;
    };
  });

  auto* pub_host =
      publish->add_subcommand("host", "Store a host network address");
  add_backend_options(pub_host, publish_opts);
  pub_host->add_option("--id", publish_id, "reuse this 40-hex identifier");
  pub_host->add_option("--address", publish_address, "host:port of the host")
      ->required();
  pub_host->callback([&] {
    run = [&]() {
      auto backend = make_backend(publish_opts);
      dhtloc::Identifier id = pick_id(publish_id);
      dhtloc::publish_host(*backend, id,
                           dhtloc::parse_address(publish_address),
                           ttl_of(publish_opts));
      std::printf("%s\n", dhtloc::encode_hex(id).c_str());
      return exit_ok;
    };
  });

  // --- resolve ---
  auto* resolve_cmd = app.add_subcommand(
      "resolve", "Resolve a resource identifier to host:port/path");
  BackendOptions resolve_opts;
  std::string resolve_id;
  add_backend_options(resolve_cmd, resolve_opts);
  resolve_cmd->add_option("id", resolve_id, "resource identifier, 40-hex")
      ->required();
  resolve_cmd->callback([&] {
    run = [&]() {
      auto backend = make_backend(resolve_opts);
      dhtloc::ResolveResult result =
          dhtloc::resolve(*backend, dhtloc::decode_hex(resolve_id));
      switch (result.status) {
        case dhtloc::ResolveStatus::ok:
          std::printf("%s\n",
                      dhtloc::format_location(*result.location).c_str());
          return exit_ok;
        case dhtloc::ResolveStatus::not_found:
          std::fprintf(stderr, "not found\n");
          return exit_not_found;
        case dhtloc::ResolveStatus::dangling_host:
          std::fprintf(stderr, "dangling host\n");
          return exit_dangling_host;
        case dhtloc::ResolveStatus::malformed_entry:
          std::fprintf(stderr, "malformed entry\n");
          return exit_malformed;
      }
      return exit_runtime;
    };
  });

  // --- migrate ---
  auto* migrate_cmd = app.add_subcommand(
      "migrate", "Move a host profile to a new network address");
  BackendOptions migrate_opts;
  std::string profile_file;
  std::string new_address;
  add_backend_options(migrate_cmd, migrate_opts);
  migrate_cmd->add_option("--profile", profile_file, "host profile file")
      ->required();
  migrate_cmd->add_option("--new-address", new_address, "target host:port")
      ->required();
  migrate_cmd->callback([&] {
    run = [&]() {
      auto backend = make_backend(migrate_opts);
      dhtloc::HostProfile profile = dhtloc::load_profile(profile_file);
      dhtloc::MigrateResult moved;
      try {
        moved = dhtloc::migrate(*backend, profile,
                                dhtloc::parse_address(new_address),
                                ttl_of(migrate_opts), migrate_opts.window);
      } catch (const dhtloc::MigrateError& e) {
        std::fprintf(stderr, "migration failed: %s (completed %zu)\n",
                     e.what(), e.completed());
        return exit_runtime;
      }
      dhtloc::save_profile(profile_file, profile);
      std::printf("elapsed_ms %.6f\n",
                  static_cast<double>(moved.elapsed.count()) / 1e6);
      std::printf("ops_issued %zu\n", moved.ops_issued);
      return exit_ok;
    };
  });

  // --- advise ---
  auto* advise_cmd = app.add_subcommand(
      "advise", "Recommend direct vs indirect entries for a host");
  struct {
    std::uint64_t n = 0;
    double rl = 1.0, rm = 1.0, wl = 1.0, wm = 1.0;
    double cg = 30.0, cp = 50.0, cr = 200.0, cq = 500.0;
    std::string format = "human";
  } advise_opts;
  advise_cmd->add_option("--n", advise_opts.n, "resources in the host")
      ->required();
  advise_cmd->add_option("--rl", advise_opts.rl, "lookups per unit time")
      ->capture_default_str();
  advise_cmd->add_option("--rm", advise_opts.rm, "migrations per unit time")
      ->capture_default_str();
  advise_cmd->add_option("--wl", advise_opts.wl, "lookup weight")
      ->capture_default_str();
  advise_cmd->add_option("--wm", advise_opts.wm, "migration weight")
      ->capture_default_str();
  advise_cmd->add_option("--cg", advise_opts.cg, "per-get spacing, ms")
      ->capture_default_str();
  advise_cmd->add_option("--cp", advise_opts.cp, "per-put spacing, ms")
      ->capture_default_str();
  advise_cmd->add_option("--cr", advise_opts.cr, "get network latency, ms")
      ->capture_default_str();
  advise_cmd->add_option("--cq", advise_opts.cq, "put network latency, ms")
      ->capture_default_str();
  advise_cmd
      ->add_option("--format", advise_opts.format, "output: human or csv")
      ->check(CLI::IsMember({"human", "csv"}));
  advise_cmd->callback([&] {
    run = [&]() {
      dhtloc::CostParams params;
      params.get_spacing = advise_opts.cg / 1e3;
      params.put_spacing = advise_opts.cp / 1e3;
      params.get_latency = advise_opts.cr / 1e3;
      params.put_latency = advise_opts.cq / 1e3;
      params.resource_count = advise_opts.n;
      params.lookup_rate = advise_opts.rl;
      params.migration_rate = advise_opts.rm;
      params.lookup_weight = advise_opts.wl;
      params.migration_weight = advise_opts.wm;
      return run_advise(params, advise_opts.format);
    };
  });

  // --- gateway serve ---
  auto* gateway_cmd = app.add_subcommand("gateway", "Gateway service");
  gateway_cmd->require_subcommand(1);
  auto* serve_cmd = gateway_cmd->add_subcommand(
      "serve", "Serve the wire protocol over an in-memory store");
  struct {
    std::string listen;
    std::size_t max_conn = 64;
    std::size_t max_request_bytes = 8192;
  } serve_opts;
  serve_cmd->add_option("--listen", serve_opts.listen, "bind host:port")
      ->required();
  serve_cmd
      ->add_option("--max-conn", serve_opts.max_conn,
                   "max concurrent connections")
      ->capture_default_str();
  serve_cmd
      ->add_option("--max-request-bytes", serve_opts.max_request_bytes,
                   "request line size limit")
      ->capture_default_str();
  serve_cmd->callback([&] {
    run = [&]() {
      return run_serve(serve_opts.listen, serve_opts.max_conn,
                       serve_opts.max_request_bytes);
    };
  });

  // --- bench ---
  auto* bench_cmd =
      app.add_subcommand("bench", "Run the lookup or migration experiment");
  bench_cmd->require_subcommand(1);
  BackendOptions bench_opts;
  struct {
    std::string out;
    std::size_t entries = 5000;
    std::size_t lookups = 2000;
    std::size_t trials = 100;
    std::vector<std::size_t> sweep;
  } bench_extra;

  auto add_bench_options = [&](CLI::App* cmd) {
    add_backend_options(cmd, bench_opts);
    cmd->add_option("--out", bench_extra.out, "destination CSV file")
        ->required();
  };

  auto bench_spec = [&]() {
    dhtloc::ExperimentSpec spec;
    spec.latency = latency_from(bench_opts);
    spec.entry_count = bench_extra.entries;
    spec.lookup_trials = bench_extra.lookups;
    spec.migration_trials = bench_extra.trials;
    if (!bench_extra.sweep.empty()) spec.resource_sweep = bench_extra.sweep;
    spec.window = bench_opts.window;
    spec.seed = bench_opts.seed;
    spec.ttl = ttl_of(bench_opts);
    return spec;
  };

  auto bench_factory = [&]() -> dhtloc::BackendFactory {
    if (is_gateway(bench_opts)) {
      dhtloc::HostAddress address = dhtloc::parse_address(
          std::string_view(bench_opts.backend).substr(8));
      return dhtloc::gateway_factory(address, bench_opts.window);
    }
    if (bench_opts.backend != "simulated") {
      throw CLI::ValidationError(
          "--backend", "expected \"simulated\" or \"gateway:<host:port>\"");
    }
    return dhtloc::simulated_factory(latency_from(bench_opts));
  };

  auto bench_backend_name = [&]() {
    return is_gateway(bench_opts) ? std::string("gateway")
                                  : std::string("simulated");
  };

  auto* bench_lookup = bench_cmd->add_subcommand(
      "lookup", "Average lookup time per entry scheme");
  add_bench_options(bench_lookup);
  bench_lookup
      ->add_option("--entries", bench_extra.entries,
                   "entries published per scheme")
      ->capture_default_str();
  bench_lookup
      ->add_option("--lookups", bench_extra.lookups, "resolves per scheme")
      ->capture_default_str();
  bench_lookup->callback([&] {
    run = [&]() {
      dhtloc::ExperimentSpec spec = bench_spec();
      dhtloc::LookupExperimentResult result =
          dhtloc::run_lookup_experiment(spec, bench_factory());
      dhtloc::emit_csv(dhtloc::to_csv_rows(result, spec, bench_backend_name()),
                       std::filesystem::path(bench_extra.out));
      return exit_ok;
    };
  });

  auto* bench_migration = bench_cmd->add_subcommand(
      "migration", "Migration time across a resource-count sweep");
  add_bench_options(bench_migration);
  bench_migration
      ->add_option("--trials", bench_extra.trials, "migrations per sweep point")
      ->capture_default_str();
  bench_migration
      ->add_option("--sweep", bench_extra.sweep,
                   "comma-separated resource counts")
      ->delimiter(',');
  bench_migration->callback([&] {
    run = [&]() {
      dhtloc::ExperimentSpec spec = bench_spec();
      std::vector<dhtloc::MigrationRow> rows =
          dhtloc::run_migration_experiment(spec, bench_factory());
      dhtloc::emit_csv(dhtloc::to_csv_rows(std::span<const dhtloc::MigrationRow>(rows),
                                           spec, bench_backend_name()),
                       std::filesystem::path(bench_extra.out));
      return exit_ok;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    return run();
  } catch (const dhtloc::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_usage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_runtime;
  }
}
