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

#ifndef DHTLOC_COST_MODEL_HPP
#define DHTLOC_COST_MODEL_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "dhtloc/error.hpp"

namespace dhtloc {

/// Inputs to the direct-vs-indirect decision. Durations are in seconds;
/// rates are events per second. The four latency constants mirror the
/// simulated backend's LatencyModel: a spacing per issued operation plus a
/// fixed network latency per get/put.
struct CostParams {
  double get_spacing = 0.030;
  double put_spacing = 0.050;
  double get_latency = 0.200;
  double put_latency = 0.500;
  std::uint64_t resource_count = 0;  // resources in the host (n)
  double lookup_rate = 0.0;          // lookups per second (r_l)
  double migration_rate = 0.0;       // migrations per second (r_m)
  double lookup_weight = 1.0;        // importance of lookup time (w_l)
  double migration_weight = 1.0;     // importance of migration time (w_m)
};

/// Throws Error unless durations and rates are non-negative, weights
/// strictly positive, and everything finite.
void validate(const CostParams& params);

enum class Recommendation { direct, indirect, tie };

std::string to_string(Recommendation r);

/// Everything the decision rests on, for display and cross-checking.
struct CostReport {
  double direct_migration_cost;    // seconds per migration
  double indirect_migration_cost;  // seconds per migration
  double direct_lookup_cost;       // seconds per lookup
  double indirect_lookup_cost;     // seconds per lookup
  double direct_overall;           // unweighted cost per unit time
  double indirect_overall;
  double direct_weighted;  // weighted cost per unit time
  double indirect_weighted;
  double threshold_lhs;  // (w_l/w_m)(r_l/r_m); +inf/NaN when r_m = 0
  double threshold_rhs;  // (n-1)*put_spacing/(get_spacing+get_latency)
  Recommendation recommendation;
};

/// Updating n direct entries: n * put_spacing + put_latency.
double migration_cost_direct(const CostParams& params);

/// Updating the single host entry: put_spacing + put_latency, whatever n is.
double migration_cost_indirect(const CostParams& params);

/// One get per direct lookup, two dependent gets per indirect lookup:
/// (get_spacing + get_latency, twice that).
std::pair<double, double> lookup_costs(const CostParams& params);

/// Unweighted costs per unit time:
///   direct   = r_l * lookup_direct + r_m * migration_direct
///   indirect = r_l * lookup_indirect + r_m * migration_indirect
std::pair<double, double> overall_costs(const CostParams& params);

/// Evaluates the weighted threshold: indirect wins when
/// (w_l/w_m)(r_l/r_m) < (n-1)*put_spacing/(get_spacing+get_latency),
/// direct when the strict reverse holds, tie on equality. Degenerate
/// denominators fall back to comparing the weighted costs directly, which
/// the inequality is derived from.
CostReport recommend(const CostParams& params);

/// Large-n shortcut: indirect when weight_ratio * rate_ratio is below
/// n*put_spacing/(get_spacing+get_latency). weight_ratio = w_l/w_m and
/// rate_ratio = r_l/r_m must be positive.
Recommendation approx_threshold(double weight_ratio, double rate_ratio,
                                const CostParams& params);

}  // namespace dhtloc

#endif  // DHTLOC_COST_MODEL_HPP
