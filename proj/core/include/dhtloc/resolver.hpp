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

#ifndef DHTLOC_RESOLVER_HPP
#define DHTLOC_RESOLVER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dhtloc/dht.hpp"
#include "dhtloc/entries.hpp"
#include "dhtloc/identifier.hpp"

namespace dhtloc {

/// How a host publishes its resources.
enum class Strategy { direct, indirect };

std::string to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);  // throws ParseError

/// One resource owned by a host.
struct ResourceBinding {
  Identifier id;
  Path path;

  friend bool operator==(const ResourceBinding&,
                         const ResourceBinding&) = default;
};

/// Client-side inventory of a mobile host: the DHT cannot be enumerated, so
/// the host keeps its own resource list.
struct HostProfile {
  Identifier host_id;
  HostAddress address;
  Strategy strategy = Strategy::direct;
  std::vector<ResourceBinding> resources;

  friend bool operator==(const HostProfile&, const HostProfile&) = default;
};

/// Checks resource ids are pairwise distinct and distinct from host_id.
void validate_profile(const HostProfile& profile);  // throws ParseError

void publish_direct(DhtBackend& backend, const Identifier& resource_id,
                    const NetworkLocation& location, Duration ttl);
void publish_indirect(DhtBackend& backend, const Identifier& resource_id,
                      const Identifier& host_id, const Path& path,
                      Duration ttl);
void publish_host(DhtBackend& backend, const Identifier& host_id,
                  const HostAddress& address, Duration ttl);

/// Publishes every entry a profile implies: direct entries per resource, or
/// indirect entries plus the host entry. Uses one windowed batch.
BatchResult publish_profile(DhtBackend& backend, const HostProfile& profile,
                            Duration ttl, std::size_t window);

enum class ResolveStatus {
  ok,
  not_found,        // no records, expired records, or a non-resource entry
  dangling_host,    // indirect entry whose host has no unexpired host entry
  malformed_entry,  // record that frames or validates incorrectly
};

std::string to_string(ResolveStatus status);

struct ResolveResult {
  ResolveStatus status = ResolveStatus::not_found;
  std::optional<NetworkLocation> location;

  explicit operator bool() const { return status == ResolveStatus::ok; }
};

/// Resolves a resource identifier to its current network location:
///   1. fetch the records under resource_id and decode the freshest;
///   2. a direct entry yields its stored location;
///   3. an indirect entry triggers a second, dependent lookup of the host
///      entry, whose address is joined with the stored path;
///   4. anything else (no records, foreign magic, a host entry under a
///      resource id) resolves to not_found.
/// Indirection is depth-1: a direct or indirect entry under the host id is
/// malformed_entry, while an empty or foreign host lookup is dangling_host.
ResolveResult resolve(DhtBackend& backend, const Identifier& resource_id);

struct MigrateResult {
  Duration elapsed = Duration::zero();
  std::size_t ops_issued = 0;
};

/// A migration aborted part-way; completed() entries carry the new address.
class MigrateError : public Error {
 public:
  MigrateError(const std::string& message, std::size_t completed)
      : Error(message), completed_(completed) {}

  std::size_t completed() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

/// Moves the host to new_address. Direct strategy re-puts one direct entry
/// per resource (windowed batch); indirect re-puts the single host entry.
/// On success profile.address is updated; on total failure it is unchanged.
/// Do not run two migrations of the same profile concurrently.
MigrateResult migrate(DhtBackend& backend, HostProfile& profile,
                      const HostAddress& new_address, Duration ttl,
                      std::size_t window);

}  // namespace dhtloc

#endif  // DHTLOC_RESOLVER_HPP
