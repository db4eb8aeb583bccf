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

#ifndef QRBENCH_RNG_HPP_
#define QRBENCH_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace qrbench {

// Perturbations must be byte-reproducible from their seeds, across compilers
// and standard libraries. std::* distributions are implementation-defined,
// so the harness carries its own fixed generator (xoshiro256**) and fixed
// sampling routines.

/// One step of the splitmix64 sequence; `state` is advanced in place.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Derives an independent stream seed from a root seed and a string tag
/// (e.g. a task_id or a parameter name). Corpus or iteration order therefore
/// never influences the stream assigned to an item.
std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view tag);

/// Deterministic xoshiro256** generator seeded via splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 payload bits.
  double next_double();

  /// Unbiased uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal draw (polar Box-Muller; one spare value is cached).
  double normal();

  /// Samples `count` distinct indices from [0, population) without
  /// replacement, by partial Fisher-Yates. Result is in selection order.
  std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                      std::size_t count);

 private:
  std::uint64_t state_[4];
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace qrbench

#endif  // QRBENCH_RNG_HPP_
