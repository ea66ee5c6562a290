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

#ifndef DHTLOC_ERROR_HPP
#define DHTLOC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dhtloc {

/// Root of all dhtloc exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (addresses, locations, paths, hex, base64,
/// profile files).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dhtloc

#endif  // DHTLOC_ERROR_HPP
