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

#include "dhtloc/cost_model.hpp"

#include <cmath>
#include <limits>
#include <tuple>

namespace dhtloc {

void validate(const CostParams& params) {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(params.get_spacing) ||
      !finite_nonneg(params.put_spacing) ||
      !finite_nonneg(params.get_latency) ||
      !finite_nonneg(params.put_latency)) {
    throw Error("latency constants must be finite and non-negative");
  }
  if (!finite_nonneg(params.lookup_rate) ||
      !finite_nonneg(params.migration_rate)) {
    throw Error("rates must be finite and non-negative");
  }
  if (!std::isfinite(params.lookup_weight) || params.lookup_weight <= 0.0 ||
      !std::isfinite(params.migration_weight) ||
      params.migration_weight <= 0.0) {
    throw Error("weights must be finite and strictly positive");
  }
}

std::string to_string(Recommendation r) {
  switch (r) {
    case Recommendation::direct:
      return "direct";
    case Recommendation::indirect:
      return "indirect";
    case Recommendation::tie:
      return "tie";
  }
  return "unknown";
}

double migration_cost_direct(const CostParams& params) {
  return static_cast<double>(params.resource_count) * params.put_spacing +
         params.put_latency;
}

double migration_cost_indirect(const CostParams& params) {
  return params.put_spacing + params.put_latency;
}

std::pair<double, double> lookup_costs(const CostParams& params) {
  double direct = params.get_spacing + params.get_latency;
  return {direct, 2.0 * direct};
}

std::pair<double, double> overall_costs(const CostParams& params) {
  auto [lookup_direct, lookup_indirect] = lookup_costs(params);
  double direct = params.lookup_rate * lookup_direct +
                  params.migration_rate * migration_cost_direct(params);
  double indirect = params.lookup_rate * lookup_indirect +
                    params.migration_rate * migration_cost_indirect(params);
  return {direct, indirect};
}

namespace {

Recommendation from_comparison(double indirect, double direct) {
  if (indirect < direct) return Recommendation::indirect;
  if (indirect > direct) return Recommendation::direct;
  return Recommendation::tie;
}

}  // namespace

CostReport recommend(const CostParams& params) {
  validate(params);

  CostReport report{};
  report.direct_migration_cost = migration_cost_direct(params);
  report.indirect_migration_cost = migration_cost_indirect(params);
  std::tie(report.direct_lookup_cost, report.indirect_lookup_cost) =
      lookup_costs(params);
  std::tie(report.direct_overall, report.indirect_overall) =
      overall_costs(params);
  report.direct_weighted =
      params.lookup_weight * params.lookup_rate * report.direct_lookup_cost +
      params.migration_weight * params.migration_rate *
          report.direct_migration_cost;
  report.indirect_weighted =
      params.lookup_weight * params.lookup_rate * report.indirect_lookup_cost +
      params.migration_weight * params.migration_rate *
          report.indirect_migration_cost;

  double n_minus_one =
      params.resource_count == 0
          ? -1.0
          : static_cast<double>(params.resource_count - 1);
  double lookup_hop = params.get_spacing + params.get_latency;
  report.threshold_lhs = (params.lookup_weight / params.migration_weight) *
                         (params.lookup_rate / params.migration_rate);
  report.threshold_rhs = n_minus_one * params.put_spacing / lookup_hop;

  if (params.migration_rate == 0.0 || lookup_hop == 0.0) {
    // The ratio form divides by these; compare the weighted costs the
    // inequality was derived from instead.
    report.recommendation =
        from_comparison(report.indirect_weighted, report.direct_weighted);
    return report;
  }
  if (report.threshold_lhs < report.threshold_rhs) {
    report.recommendation = Recommendation::indirect;
  } else if (report.threshold_lhs > report.threshold_rhs) {
    report.recommendation = Recommendation::direct;
  } else {
    report.recommendation = Recommendation::tie;
  }
  return report;
}

Recommendation approx_threshold(double weight_ratio, double rate_ratio,
                                const CostParams& params) {
  if (!(weight_ratio > 0.0) || !(rate_ratio > 0.0)) {
    throw Error("weight and rate ratios must be strictly positive");
  }
  validate(params);
  double numerator =
      static_cast<double>(params.resource_count) * params.put_spacing;
  double lookup_hop = params.get_spacing + params.get_latency;
  if (lookup_hop == 0.0) {
    // Zero lookup hop: any migration saving dominates.
    return numerator > 0.0 ? Recommendation::indirect : Recommendation::direct;
  }
  double lhs = weight_ratio * rate_ratio;
  double rhs = numerator / lookup_hop;
  if (lhs < rhs) return Recommendation::indirect;
  if (lhs > rhs) return Recommendation::direct;
  return Recommendation::tie;
}

}  // namespace dhtloc
