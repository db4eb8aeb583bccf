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

#include "qrbench/noise.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qrbench/error.hpp"
#include "qrbench/rng.hpp"

namespace qrbench {

NoiseFamily parse_noise_family(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::kGaussian;
  if (name == "uniform") return NoiseFamily::kUniform;
  throw ValidationError("unknown noise family: '" + std::string(name) +
                        "' (expected gaussian or uniform)");
}

std::string_view noise_family_name(NoiseFamily family) {
  return family == NoiseFamily::kGaussian ? "gaussian" : "uniform";
}

bool NoiseSpec::is_canonical_level() const {
  for (double canonical : kCanonicalNoiseLevels) {
    if (level == canonical) return true;
  }
  return false;
}

std::string NoiseSpec::label() const {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "noise-%s-%.0e-s%llu",
                std::string(noise_family_name(family)).c_str(), level,
                static_cast<unsigned long long>(seed));
  return std::string(buffer);
}

namespace {

std::filesystem::path make_spill_file(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string tmpl = (dir / "qrbench-snapshot-XXXXXX").string();
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) {
    throw PerturbError("snapshot: cannot create spill file in " +
                       dir.string());
  }
  close(fd);
  return std::filesystem::path(tmpl);
}

}  // namespace

WeightSnapshot::~WeightSnapshot() {
  if (!spill_path_.empty()) {
    std::error_code ec;
    std::filesystem::remove(spill_path_, ec);
  }
}

WeightSnapshot::WeightSnapshot(WeightSnapshot&& other) noexcept
    : entries_(std::move(other.entries_)),
      spill_path_(std::move(other.spill_path_)) {
  other.spill_path_.clear();
}

WeightSnapshot& WeightSnapshot::operator=(WeightSnapshot&& other) noexcept {
  if (this != &other) {
    if (!spill_path_.empty()) {
      std::error_code ec;
      std::filesystem::remove(spill_path_, ec);
    }
    entries_ = std::move(other.entries_);
    spill_path_ = std::move(other.spill_path_);
    other.spill_path_.clear();
  }
  return *this;
}

WeightSnapshot snapshot(const ParameterList& params,
                        std::size_t memory_budget_bytes,
                        const std::filesystem::path& spill_dir) {
  std::size_t total_bytes = 0;
  for (const auto& param : params) {
    total_bytes += static_cast<std::size_t>(param->size()) * sizeof(float);
  }

  WeightSnapshot snap;
  const bool spill = total_bytes > memory_budget_bytes;
  std::ofstream spill_out;
  if (spill) {
    snap.spill_path_ = make_spill_file(spill_dir);
    spill_out.open(snap.spill_path_, std::ios::binary | std::ios::trunc);
    if (!spill_out) {
      throw PerturbError("snapshot: cannot open spill file " +
                         snap.spill_path_.string());
    }
  }

  std::uint64_t offset = 0;
  for (const auto& param : params) {
    WeightSnapshot::Entry entry;
    entry.name = param->name();
    entry.shape.assign(param->shape().begin(), param->shape().end());
    entry.size = param->size();
    std::vector<float> values(static_cast<std::size_t>(entry.size));
    param->read(values);
    if (spill) {
      entry.file_offset = offset;
      spill_out.write(reinterpret_cast<const char*>(values.data()),
                      static_cast<std::streamsize>(values.size() *
                                                   sizeof(float)));
      offset += values.size() * sizeof(float);
    } else {
      entry.values = std::move(values);
    }
    snap.entries_.push_back(std::move(entry));
  }
  if (spill) {
    spill_out.flush();
    if (!spill_out) {
      throw PerturbError("snapshot: spill write failed");
    }
  }
  return snap;
}

void restore(const ParameterList& params, const WeightSnapshot& snap) {
  if (params.size() != snap.entries().size()) {
    throw PerturbError("restore: snapshot holds " +
                       std::to_string(snap.entries().size()) +
                       " parameters, model has " +
                       std::to_string(params.size()));
  }
  std::ifstream spill_in;
  if (snap.spilled()) {
    spill_in.open(snap.spill_path_, std::ios::binary);
    if (!spill_in) {
      throw PerturbError("restore: cannot reopen spill file " +
                         snap.spill_path_.string());
    }
  }

  for (std::size_t i = 0; i < params.size(); ++i) {
    ParameterView& param = *params[i];
    const WeightSnapshot::Entry& entry = snap.entries()[i];
    const auto shape = param.shape();
    const bool shape_matches =
        entry.name == param.name() && entry.size == param.size() &&
        std::equal(entry.shape.begin(), entry.shape.end(), shape.begin(),
                   shape.end());
    if (!shape_matches) {
      throw PerturbError("restore: shape mismatch for parameter '" +
                         param.name() + "'");
    }
    const std::size_t count = static_cast<std::size_t>(entry.size);
    if (snap.spilled()) {
      std::vector<float> target(count);
      spill_in.seekg(static_cast<std::streamoff>(entry.file_offset));
      spill_in.read(reinterpret_cast<char*>(target.data()),
                    static_cast<std::streamsize>(count * sizeof(float)));
      if (!spill_in) {
        throw PerturbError("restore: spill read failed for '" + entry.name +
                           "'");
      }
      param.assign(target);
    } else {
      param.assign(entry.values);
    }
  }
}

PerturbationReport inject_noise(const ParameterList& params,
                                const NoiseSpec& spec) {
  if (spec.level < 0.0) {
    throw ValidationError("noise level must be >= 0");
  }

  PerturbationReport report;
  report.spec = spec;

  // Pre-call snapshot so a non-finite result can roll back atomically.
  WeightSnapshot pre = snapshot(params);

  double sum = 0.0;
  double sum_sq = 0.0;
  bool non_finite = false;

  for (const auto& param : params) {
    if (!param->is_trainable()) continue;
    const std::size_t count = static_cast<std::size_t>(param->size());
    ParameterNoiseStats stats;
    stats.name = param->name();
    stats.count = param->size();
    report.total_count += param->size();

    if (spec.level == 0.0 || count == 0) {
      // Zero noise is an exact no-op, preserving every bit (adding a zero
      // delta would flip the sign bit of -0.0 weights).
      report.parameters.push_back(std::move(stats));
      continue;
    }

    Rng rng(derive_seed(spec.seed, param->name()));
    std::vector<float> delta(count);
    double param_sum = 0.0;
    double param_sum_sq = 0.0;
    double param_max_abs = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double draw;
      if (spec.family == NoiseFamily::kGaussian) {
        draw = spec.level * rng.normal();
      } else {
        draw = (2.0 * rng.next_double() - 1.0) * spec.level;
      }
      delta[i] = static_cast<float>(draw);
      const double as_double = static_cast<double>(delta[i]);
      param_sum += as_double;
      param_sum_sq += as_double * as_double;
      param_max_abs = std::max(param_max_abs, std::abs(as_double));
    }
    param->add_in_place(delta);

    std::vector<float> check(count);
    param->read(check);
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::isfinite(check[i])) {
        non_finite = true;
        break;
      }
    }
    if (non_finite) break;

    stats.mean = param_sum / static_cast<double>(count);
    const double variance =
        param_sum_sq / static_cast<double>(count) - stats.mean * stats.mean;
    stats.stddev = variance > 0.0 ? std::sqrt(variance) : 0.0;
    stats.max_abs = param_max_abs;
    report.parameters.push_back(std::move(stats));

    sum += param_sum;
    sum_sq += param_sum_sq;
    report.max_abs = std::max(report.max_abs, param_max_abs);
  }

  if (non_finite) {
    restore(params, pre);
    std::ostringstream message;
    message << "inject_noise: level " << spec.level
            << " produced non-finite weights; model restored";
    throw PerturbError(message.str());
  }

  const std::int64_t noisy_count =
      spec.level == 0.0 ? 0 : report.total_count;
  if (noisy_count > 0) {
    report.mean = sum / static_cast<double>(noisy_count);
    const double variance =
        sum_sq / static_cast<double>(noisy_count) - report.mean * report.mean;
    report.stddev = variance > 0.0 ? std::sqrt(variance) : 0.0;
  }
  return report;
}

}  // namespace qrbench
