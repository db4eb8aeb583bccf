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

#ifndef QRBENCH_NOISE_HPP_
#define QRBENCH_NOISE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrbench {

enum class NoiseFamily { kGaussian, kUniform };

NoiseFamily parse_noise_family(std::string_view name);
std::string_view noise_family_name(NoiseFamily family);

/// The intensity ladder used throughout: sigma for gaussian noise,
/// half-range for uniform noise.
inline constexpr std::array<double, 5> kCanonicalNoiseLevels = {
    1e-4, 1e-3, 3e-3, 5e-3, 1e-2};

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kGaussian;
  double level = 0.0;  // sigma (gaussian) or half-range (uniform)
  std::uint64_t seed = 0;

  bool is_canonical_level() const;
  std::string label() const;  // e.g. "noise-gaussian-5e-03-s7"
};

/// Mutable view of one named model parameter as a flat float buffer.
/// add_in_place changes exactly this parameter's values and nothing else.
class ParameterView {
 public:
  virtual ~ParameterView() = default;

  virtual const std::string& name() const = 0;
  virtual std::span<const std::int64_t> shape() const = 0;
  virtual bool is_trainable() const = 0;
  virtual std::int64_t size() const = 0;

  /// Copies the current values into `out`; out.size() must equal size().
  virtual void read(std::span<float> out) const = 0;

  /// Elementwise in-place addition; delta.size() must equal size().
  virtual void add_in_place(std::span<const float> delta) = 0;

  /// Overwrites the values. Needed by restore(): once a parameter holds a
  /// non-finite value, no additive delta can bring it back (inf + x stays
  /// non-finite), so rollback after an overflow must assign.
  virtual void assign(std::span<const float> values) = 0;
};

using ParameterList = std::vector<std::unique_ptr<ParameterView>>;

struct ParameterNoiseStats {
  std::string name;
  std::int64_t count = 0;  // elements perturbed
  double mean = 0.0;       // empirical mean of injected deltas
  double stddev = 0.0;     // empirical standard deviation of injected deltas
  double max_abs = 0.0;
};

struct PerturbationReport {
  NoiseSpec spec;
  std::vector<ParameterNoiseStats> parameters;  // trainable parameters only
  std::int64_t total_count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double max_abs = 0.0;
};

/// Full-fidelity copy of every parameter (trainable or not). Spills to a
/// temporary file when the total exceeds `memory_budget_bytes`.
class WeightSnapshot {
 public:
  WeightSnapshot() = default;
  ~WeightSnapshot();
  WeightSnapshot(WeightSnapshot&&) noexcept;
  WeightSnapshot& operator=(WeightSnapshot&&) noexcept;
  WeightSnapshot(const WeightSnapshot&) = delete;
  WeightSnapshot& operator=(const WeightSnapshot&) = delete;

  struct Entry {
    std::string name;
    std::vector<std::int64_t> shape;
    std::int64_t size = 0;
    std::vector<float> values;      // in memory, or
    std::uint64_t file_offset = 0;  // offset into the spill file
  };

  bool spilled() const { return !spill_path_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  friend WeightSnapshot snapshot(const ParameterList& params,
                                 std::size_t memory_budget_bytes,
                                 const std::filesystem::path& spill_dir);
  friend void restore(const ParameterList& params,
                      const WeightSnapshot& snap);

  std::vector<Entry> entries_;
  std::filesystem::path spill_path_;
};

/// Captures every parameter bit-exactly.
WeightSnapshot snapshot(
    const ParameterList& params,
    std::size_t memory_budget_bytes = std::size_t{256} << 20,
    const std::filesystem::path& spill_dir = std::filesystem::temp_directory_path());

/// Restores every parameter to its snapshot values, bit-exactly.
/// Throws PerturbError if names, shapes or sizes do not match the snapshot.
void restore(const ParameterList& params, const WeightSnapshot& snap);

/// Adds elementwise i.i.d. noise to every trainable parameter:
/// gaussian -> level * standard-normal draw; uniform -> (2u - 1) * level
/// with u uniform on [0,1). Non-trainable parameters are untouched. Each
/// parameter's stream is derived from (spec.seed, parameter name), so the
/// result is independent of iteration order.
///
/// If any perturbed value becomes non-finite the model is restored to its
/// pre-call state and PerturbError is thrown.
PerturbationReport inject_noise(const ParameterList& params,
                                const NoiseSpec& spec);

}  // namespace qrbench

#endif  // QRBENCH_NOISE_HPP_
