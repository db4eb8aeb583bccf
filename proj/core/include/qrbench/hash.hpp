//
// Copyright 2026 The qrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef QRBENCH_HASH_HPP_
#define QRBENCH_HASH_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace qrbench {

/// FNV-1a 64-bit. Used for seed derivation and prompt fingerprints.
std::uint64_t fnv1a64(std::string_view data);

/// Lower-case hex rendering of a 64-bit value, zero padded to 16 chars.
std::string hex64(std::uint64_t value);

/// SHA-256 hex digest. Used for content-addressed run records and corpus
/// hashes, where collision resistance actually matters.
std::string sha256_hex(std::string_view data);

}  // namespace qrbench

#endif  // QRBENCH_HASH_HPP_
