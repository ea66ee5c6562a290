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

#include "dhtloc/resolver.hpp"

#include <algorithm>
#include <unordered_set>

namespace dhtloc {

std::string to_string(Strategy strategy) {
  return strategy == Strategy::direct ? "direct" : "indirect";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "direct") return Strategy::direct;
  if (text == "indirect") return Strategy::indirect;
  throw ParseError("strategy must be \"direct\" or \"indirect\", got \"" +
                   std::string(text) + "\"");
}

std::string to_string(ResolveStatus status) {
  switch (status) {
    case ResolveStatus::ok:
      return "ok";
    case ResolveStatus::not_found:
      return "not found";
    case ResolveStatus::dangling_host:
      return "dangling host";
    case ResolveStatus::malformed_entry:
      return "malformed entry";
  }
  return "unknown";
}

void validate_profile(const HostProfile& profile) {
  validate_address(profile.address);
  std::unordered_set<Identifier, IdentifierHash> seen;
  for (const ResourceBinding& resource : profile.resources) {
    validate_path(resource.path);
    if (resource.id == profile.host_id) {
      throw ParseError("resource id collides with host id");
    }
    if (!seen.insert(resource.id).second) {
      throw ParseError("duplicate resource id " + encode_hex(resource.id));
    }
  }
}

void publish_direct(DhtBackend& backend, const Identifier& resource_id,
                    const NetworkLocation& location, Duration ttl) {
  backend.put(resource_id, encode_entry(DirectEntry{location}), ttl);
}

void publish_indirect(DhtBackend& backend, const Identifier& resource_id,
                      const Identifier& host_id, const Path& path,
                      Duration ttl) {
  backend.put(resource_id, encode_entry(IndirectEntry{host_id, path}), ttl);
}

void publish_host(DhtBackend& backend, const Identifier& host_id,
                  const HostAddress& address, Duration ttl) {
  backend.put(host_id, encode_entry(HostEntry{address}), ttl);
}

BatchResult publish_profile(DhtBackend& backend, const HostProfile& profile,
                            Duration ttl, std::size_t window) {
  validate_profile(profile);
  std::vector<PutOp> ops;
  ops.reserve(profile.resources.size() + 1);
  if (profile.strategy == Strategy::indirect) {
    ops.push_back(PutOp{profile.host_id,
                        encode_entry(HostEntry{profile.address}), ttl});
  }
  for (const ResourceBinding& resource : profile.resources) {
    Entry entry =
        profile.strategy == Strategy::direct
            ? Entry{DirectEntry{{profile.address, resource.path}}}
            : Entry{IndirectEntry{profile.host_id, resource.path}};
    ops.push_back(PutOp{resource.id, encode_entry(entry), ttl});
  }
  return backend.batch_put(ops, window);
}

ResolveResult resolve(DhtBackend& backend, const Identifier& resource_id) {
  std::vector<StoredValue> records = backend.get(resource_id);
  const StoredValue* record = freshest(records);
  if (record == nullptr) return {ResolveStatus::not_found, std::nullopt};

  Entry entry;
  try {
    entry = decode_entry(record->value);
  } catch (const ForeignEntryError&) {
    // Another application's data; indistinguishable from absence.
    return {ResolveStatus::not_found, std::nullopt};
  } catch (const EntryDecodeError&) {
    return {ResolveStatus::malformed_entry, std::nullopt};
  }

  if (const auto* direct = std::get_if<DirectEntry>(&entry)) {
    return {ResolveStatus::ok, direct->location};
  }
  if (const auto* indirect = std::get_if<IndirectEntry>(&entry)) {
    // Dependent second lookup; cannot overlap the first.
    std::vector<StoredValue> host_records = backend.get(indirect->host_id);
    const StoredValue* host_record = freshest(host_records);
    if (host_record == nullptr) {
      return {ResolveStatus::dangling_host, std::nullopt};
    }
    Entry host_entry;
    try {
      host_entry = decode_entry(host_record->value);
    } catch (const ForeignEntryError&) {
      // No usable host entry under the host id.
      return {ResolveStatus::dangling_host, std::nullopt};
    } catch (const EntryDecodeError&) {
      return {ResolveStatus::malformed_entry, std::nullopt};
    }
    const auto* host = std::get_if<HostEntry>(&host_entry);
    if (host == nullptr) {
      // Indirection is depth-1 by design; chained entries are malformed.
      return {ResolveStatus::malformed_entry, std::nullopt};
    }
    return {ResolveStatus::ok,
            NetworkLocation{host->address, indirect->path}};
  }
  // A host entry under a resource identifier: hosts are not resources.
  return {ResolveStatus::not_found, std::nullopt};
}

MigrateResult migrate(DhtBackend& backend, HostProfile& profile,
                      const HostAddress& new_address, Duration ttl,
                      std::size_t window) {
  validate_address(new_address);
  validate_profile(profile);

  if (profile.strategy == Strategy::indirect) {
    TimePoint start = backend.now();
    try {
      publish_host(backend, profile.host_id, new_address, ttl);
    } catch (const BackendError& e) {
      throw MigrateError(e.what(), 0);
    }
    profile.address = new_address;
    return MigrateResult{backend.now() - start, 1};
  }

  std::vector<PutOp> ops;
  ops.reserve(profile.resources.size());
  for (const ResourceBinding& resource : profile.resources) {
    ops.push_back(PutOp{
        resource.id,
        encode_entry(DirectEntry{{new_address, resource.path}}), ttl});
  }
  BatchResult result;
  try {
    result = backend.batch_put(ops, window);
  } catch (const BatchPutError& e) {
    throw MigrateError(e.what(), e.completed());
  } catch (const BackendError& e) {
    throw MigrateError(e.what(), 0);
  }
  profile.address = new_address;
  return MigrateResult{result.elapsed, result.completed};
}

}  // namespace dhtloc
