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

#include <random>

#include "dhtloc/cost_model.hpp"
#include "dhtloc/dht.hpp"
#include "dhtloc/resolver.hpp"

using namespace dhtloc;
using namespace std::chrono_literals;

namespace {

CostParams params_ms(double cg, double cp, double cr, double cq,
                     std::uint64_t n = 0, double rl = 1, double rm = 1,
                     double wl = 1, double wm = 1) {
  CostParams p;
  p.get_spacing = cg / 1e3;
  p.put_spacing = cp / 1e3;
  p.get_latency = cr / 1e3;
  p.put_latency = cq / 1e3;
  p.resource_count = n;
  p.lookup_rate = rl;
  p.migration_rate = rm;
  p.lookup_weight = wl;
  p.migration_weight = wm;
  return p;
}

Identifier make_id(std::uint8_t tag) {
  Identifier::Octets octets{};
  octets[0] = tag;
  return Identifier(octets);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("direct migration cost is linear in n") {
  CHECK(migration_cost_direct(params_ms(30, 50, 200, 500, 0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(migration_cost_direct(params_ms(30, 54, 200, 1000, 5000)) ==
        doctest::Approx(271.0).epsilon(1e-12));
  // n = 1 coincides with the indirect cost
  auto p = params_ms(30, 50, 200, 500, 1);
  CHECK(migration_cost_direct(p) == migration_cost_indirect(p));
}

TEST_CASE("indirect migration cost ignores n") {
  for (std::uint64_t n : {0ull, 1ull, 10ull, 5000ull}) {
    CHECK(migration_cost_indirect(params_ms(30, 50, 200, 100, n)) ==
          doctest::Approx(0.15).epsilon(1e-12));
  }
  CHECK(migration_cost_indirect(params_ms(30, 0, 200, 0, 7)) == 0.0);
}

TEST_CASE("lookup costs: indirect is exactly twice direct") {
  auto [direct, indirect] = lookup_costs(params_ms(30, 50, 200, 500));
  CHECK(direct == doctest::Approx(0.23).epsilon(1e-12));
  CHECK(indirect == doctest::Approx(0.46).epsilon(1e-12));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto p = params_ms(uniform(rng, 0, 500), uniform(rng, 0, 500),
                       uniform(rng, 0, 500), uniform(rng, 0, 500));
    auto [d, ind] = lookup_costs(p);
    CHECK(ind == 2.0 * d);
  }
}

TEST_CASE("cost formulas agree with the simulated backend") {
  // migration, direct, n = 10
  LatencyModel model;  // 30/50/200/500 ms defaults
  {
    SimulatedBackend backend(model);
    HostProfile profile;
    profile.host_id = make_id(1);
    profile.address = {"10.0.0.1", 8080};
    profile.strategy = Strategy::direct;
    for (int i = 0; i < 10; ++i) {
      profile.resources.push_back(ResourceBinding{
          make_id(static_cast<std::uint8_t>(10 + i)), Path{"/r"}});
    }
    MigrateResult moved =
        migrate(backend, profile, {"10.0.0.2", 8080}, 3600s, 100);
    double elapsed_s = static_cast<double>(moved.elapsed.count()) / 1e9;
    CHECK(elapsed_s ==
          doctest::Approx(migration_cost_direct(params_ms(30, 50, 200, 500, 10)))
              .epsilon(1e-12));
  }
  // migration, indirect
  {
    SimulatedBackend backend(model);
    HostProfile profile;
    profile.host_id = make_id(1);
    profile.address = {"10.0.0.1", 8080};
    profile.strategy = Strategy::indirect;
    MigrateResult moved =
        migrate(backend, profile, {"10.0.0.2", 8080}, 3600s, 100);
    double elapsed_s = static_cast<double>(moved.elapsed.count()) / 1e9;
    CHECK(elapsed_s ==
          doctest::Approx(migration_cost_indirect(params_ms(30, 50, 200, 500)))
              .epsilon(1e-12));
  }
  // lookups, both schemes
  {
    SimulatedBackend backend(model);
    publish_direct(backend, make_id(2), {{"10.0.0.1", 8080}, Path{"/a"}},
                   3600s);
    publish_host(backend, make_id(1), {"10.0.0.1", 8080}, 3600s);
    publish_indirect(backend, make_id(3), make_id(1), Path{"/a"}, 3600s);
    auto timed = [&backend](const Identifier& id) {
      TimePoint before = backend.now();
      REQUIRE(resolve(backend, id).status == ResolveStatus::ok);
      return static_cast<double>((backend.now() - before).count()) / 1e9;
    };
    auto [cost_direct, cost_indirect] =
        lookup_costs(params_ms(30, 50, 200, 500));
    CHECK(timed(make_id(2)) == doctest::Approx(cost_direct).epsilon(1e-12));
    CHECK(timed(make_id(3)) == doctest::Approx(cost_indirect).epsilon(1e-12));
  }
}

TEST_CASE("overall costs in the limit cases") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    // no migrations: direct never loses
    auto p = params_ms(uniform(rng, 1, 300), uniform(rng, 1, 300),
                       uniform(rng, 1, 300), uniform(rng, 1, 300),
                       rng() % 10000, uniform(rng, 0, 50), 0);
    auto [direct, indirect] = overall_costs(p);
    CHECK(direct <= indirect);

    // no lookups, n >= 2: indirect wins
    p.lookup_rate = 0;
    p.migration_rate = uniform(rng, 0.001, 50);
    p.resource_count = 2 + rng() % 10000;
    std::tie(direct, indirect) = overall_costs(p);
    CHECK(indirect < direct);
  }
}

TEST_CASE("overall cost gap reduces to the paper's inequality") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    auto p = params_ms(uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       1 + rng() % 5000, uniform(rng, 0.001, 50),
                       uniform(rng, 0.001, 50));
    auto [direct, indirect] = overall_costs(p);
    bool cheaper = indirect < direct;
    bool inequality =
        p.lookup_rate * (p.get_spacing + p.get_latency) <
        p.migration_rate * static_cast<double>(p.resource_count - 1) *
            p.put_spacing;
    CHECK(cheaper == inequality);
  }
}

TEST_CASE("single-resource hosts never benefit from indirection") {
  auto report = recommend(params_ms(30, 50, 200, 500, 1, 5, 5));
  CHECK(report.threshold_rhs == 0.0);
  CHECK(report.recommendation == Recommendation::direct);
}

TEST_CASE("worked threshold example lands at 4.5") {
  // equal weights and rates, c_g = c_r = c_p: rhs = 9/2
  auto report = recommend(params_ms(50, 50, 50, 500, 10, 3, 3));
  CHECK(report.threshold_lhs == doctest::Approx(1.0));
  CHECK(report.threshold_rhs == doctest::Approx(4.5));
  CHECK(report.recommendation == Recommendation::indirect);
}

TEST_CASE("recommendation equals the weighted-cost argmin") {
  std::mt19937_64 rng(4);
  int ties = 0;
  for (int i = 0; i < 20000; ++i) {
    auto p = params_ms(uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       1 + rng() % 5000, uniform(rng, 0.001, 50),
                       uniform(rng, 0.001, 50), uniform(rng, 0.01, 10),
                       uniform(rng, 0.01, 10));
    CostReport report = recommend(p);
    if (report.direct_weighted == report.indirect_weighted) {
      ++ties;
      CHECK(report.recommendation == Recommendation::tie);
      continue;
    }
    Recommendation expected =
        report.indirect_weighted < report.direct_weighted
            ? Recommendation::indirect
            : Recommendation::direct;
    CHECK(report.recommendation == expected);
  }
  CHECK(ties < 5);  // equality is essentially impossible with random draws
}

TEST_CASE("scaling all latencies together never flips the verdict") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    auto p = params_ms(uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       1 + rng() % 5000, uniform(rng, 0.001, 50),
                       uniform(rng, 0.001, 50), uniform(rng, 0.01, 10),
                       uniform(rng, 0.01, 10));
    double lambda = uniform(rng, 0.01, 100);
    CostParams scaled = p;
    scaled.get_spacing *= lambda;
    scaled.put_spacing *= lambda;
    scaled.get_latency *= lambda;
    scaled.put_latency *= lambda;
    CHECK(recommend(p).recommendation == recommend(scaled).recommendation);
  }
}

TEST_CASE("scaling both weights together never flips the verdict") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    auto p = params_ms(uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       1 + rng() % 5000, uniform(rng, 0.001, 50),
                       uniform(rng, 0.001, 50), uniform(rng, 0.01, 10),
                       uniform(rng, 0.01, 10));
    double lambda = uniform(rng, 0.01, 100);
    CostParams scaled = p;
    scaled.lookup_weight *= lambda;
    scaled.migration_weight *= lambda;
    CHECK(recommend(p).recommendation == recommend(scaled).recommendation);
  }
}

TEST_CASE("growing n never flips indirect back to direct") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto p = params_ms(uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       uniform(rng, 0.1, 300), uniform(rng, 0.1, 300), 1,
                       uniform(rng, 0.001, 20), uniform(rng, 0.001, 20),
                       uniform(rng, 0.01, 10), uniform(rng, 0.01, 10));
    bool went_indirect = false;
    for (std::uint64_t n = 1; n <= 400; ++n) {
      p.resource_count = n;
      Recommendation r = recommend(p).recommendation;
      if (went_indirect) CHECK(r == Recommendation::indirect);
      if (r == Recommendation::indirect) went_indirect = true;
    }
  }
}

TEST_CASE("degenerate parameters have defined verdicts") {
  // no migrations at all: lookups decide
  auto no_migrations = params_ms(30, 50, 200, 500, 100, 5, 0);
  CHECK(recommend(no_migrations).recommendation == Recommendation::direct);
  // no migrations and no lookups: nothing to optimize
  auto idle = params_ms(30, 50, 200, 500, 100, 0, 0);
  CHECK(recommend(idle).recommendation == Recommendation::tie);
  // free lookups, costly puts: indirection costs nothing extra
  auto free_lookups = params_ms(0, 50, 0, 500, 100, 5, 5);
  CHECK(recommend(free_lookups).recommendation == Recommendation::indirect);
  // everything free
  auto all_zero = params_ms(0, 0, 0, 0, 100, 5, 5);
  CHECK(recommend(all_zero).recommendation == Recommendation::tie);
  // n = 1 with zero lookup rate: both sides zero
  auto both_zero = params_ms(30, 50, 200, 500, 1, 0, 5);
  CHECK(recommend(both_zero).recommendation == Recommendation::tie);
}

TEST_CASE("invalid parameters are rejected") {
  auto p = params_ms(30, 50, 200, 500, 10);
  p.lookup_weight = 0;
  CHECK_THROWS_AS(recommend(p), Error);
  p = params_ms(30, 50, 200, 500, 10);
  p.migration_rate = -1;
  CHECK_THROWS_AS(recommend(p), Error);
  p = params_ms(-30, 50, 200, 500, 10);
  CHECK_THROWS_AS(recommend(p), Error);
}

TEST_CASE("approximate threshold worked example") {
  // W=1, R=10, n=100, c_p=c_g=c_r: rhs = 100/2 = 50 > 10
  // (1 s constants keep the arithmetic exact in binary)
  auto p = params_ms(1000, 1000, 1000, 500, 100);
  CHECK(approx_threshold(1.0, 10.0, p) == Recommendation::indirect);
  CHECK(approx_threshold(1.0, 50.0, p) == Recommendation::tie);
  CHECK(approx_threshold(1.0, 50.5, p) == Recommendation::direct);
}

TEST_CASE("approximate threshold with zero numerator is never indirect") {
  auto p = params_ms(50, 0, 50, 500, 100);
  CHECK(approx_threshold(1.0, 0.001, p) == Recommendation::direct);
  p = params_ms(50, 50, 50, 500, 0);
  CHECK(approx_threshold(1.0, 0.001, p) == Recommendation::direct);
}

TEST_CASE("approximate threshold rejects non-positive ratios") {
  auto p = params_ms(30, 50, 200, 500, 10);
  CHECK_THROWS_AS(approx_threshold(0.0, 1.0, p), Error);
  CHECK_THROWS_AS(approx_threshold(1.0, -2.0, p), Error);
}

TEST_CASE("approximate threshold agrees with the exact one for large n") {
  std::mt19937_64 rng(8);
  int band = 0;
  for (int i = 0; i < 5000; ++i) {
    double wl = uniform(rng, 0.01, 10);
    double wm = uniform(rng, 0.01, 10);
    double rl = uniform(rng, 0.001, 50);
    double rm = uniform(rng, 0.001, 50);
    auto p = params_ms(uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       uniform(rng, 0.1, 300), uniform(rng, 0.1, 300),
                       100 + rng() % 10000, rl, rm, wl, wm);
    double ratio = (wl / wm) * (rl / rm);
    double hop = p.get_spacing + p.get_latency;
    double exact_rhs =
        static_cast<double>(p.resource_count - 1) * p.put_spacing / hop;
    double approx_rhs =
        static_cast<double>(p.resource_count) * p.put_spacing / hop;
    if (ratio >= std::min(exact_rhs, approx_rhs) &&
        ratio <= std::max(exact_rhs, approx_rhs)) {
      ++band;  // inside the (n-1) vs n disagreement band
      continue;
    }
    CHECK(approx_threshold(wl / wm, rl / rm, p) ==
          recommend(p).recommendation);
  }
  CHECK(band < 100);  // the band is narrow at n >= 100
}

TEST_CASE("crossover pinpoint at 4.5") {
  // n=10, c_p=c_g=c_r=1s, unit weights: rhs = 9/2 exactly
  auto p = params_ms(1000, 1000, 1000, 1000, 10, 0, 1);
  for (double ratio : {4.4, 4.45, 4.49, 4.499}) {
    p.lookup_rate = ratio;
    CHECK(recommend(p).recommendation == Recommendation::indirect);
  }
  p.lookup_rate = 4.5;
  CHECK(recommend(p).recommendation == Recommendation::tie);
  for (double ratio : {4.501, 4.51, 4.55, 4.6}) {
    p.lookup_rate = ratio;
    CHECK(recommend(p).recommendation == Recommendation::direct);
  }
}
