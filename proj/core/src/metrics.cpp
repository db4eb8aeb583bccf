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

#include "qrbench/metrics.hpp"

#include <cmath>

#include "qrbench/error.hpp"

namespace qrbench {

namespace {

void check_scores(const ConditionScores& scores, const char* who) {
  if (scores.clean < 0.0 || scores.clean > 1.0 || scores.attacked < 0.0 ||
      scores.attacked > 1.0) {
    throw DomainError(std::string(who) + ": pass@1 scores must be in [0,1]");
  }
}

}  // namespace

double percent_delta(const ConditionScores& scores) {
  check_scores(scores, "percent_delta");
  if (scores.clean == 0.0) {
    throw DomainError(
        "percent_delta: clean pass@1 is zero; degradation is undefined");
  }
  return (scores.clean - scores.attacked) / scores.clean;
}

RobustnessVerdict rrs(const ConditionScores& orig,
                      const ConditionScores& quant) {
  check_scores(orig, "rrs(orig)");
  check_scores(quant, "rrs(quant)");

  RobustnessVerdict verdict;
  verdict.delta_orig = orig.clean - orig.attacked;
  verdict.delta_quant = quant.clean - quant.attacked;
  const double d_o = verdict.delta_orig;
  const double d_q = verdict.delta_quant;
  constexpr double tau = kDeltaTolerance;

  if (d_o > tau && d_q > tau) {
    const double ratio = d_o / d_q;
    verdict.rrs = ratio;
    if (std::abs(ratio - 1.0) <= kRrsTieTolerance) {
      verdict.category = RobustnessCategory::kTie;
    } else if (ratio > 1.0) {
      verdict.category = RobustnessCategory::kQuantMoreRobust;
    } else {
      verdict.category = RobustnessCategory::kOrigMoreRobust;
    }
    return verdict;
  }
  if (d_q <= tau && d_o > tau) {
    verdict.category = RobustnessCategory::kQuantMoreRobust;
    return verdict;
  }
  if (d_o <= tau && d_q > tau) {
    verdict.category = RobustnessCategory::kOrigMoreRobust;
    return verdict;
  }
  if (std::abs(d_o) <= tau && std::abs(d_q) <= tau) {
    verdict.category = RobustnessCategory::kTie;
    return verdict;
  }
  // At least one model improved under attack and none was damaged: the
  // larger improvement (more negative delta) wins.
  if (std::abs(d_o - d_q) <= tau) {
    verdict.category = RobustnessCategory::kTie;
  } else if (d_q < d_o) {
    verdict.category = RobustnessCategory::kQuantMoreRobust;
  } else {
    verdict.category = RobustnessCategory::kOrigMoreRobust;
  }
  return verdict;
}

Tally tally(const std::vector<RobustnessVerdict>& verdicts) {
  if (verdicts.empty()) {
    throw DomainError("tally: empty verdict list");
  }
  std::size_t quant = 0;
  std::size_t orig = 0;
  std::size_t tie = 0;
  for (const RobustnessVerdict& verdict : verdicts) {
    switch (verdict.category) {
      case RobustnessCategory::kQuantMoreRobust:
        ++quant;
        break;
      case RobustnessCategory::kOrigMoreRobust:
        ++orig;
        break;
      case RobustnessCategory::kTie:
        ++tie;
        break;
      case RobustnessCategory::kUndefined:
        break;  // missing data is excluded from the population
    }
  }
  const std::size_t total = quant + orig + tie;
  if (total == 0) {
    throw DomainError("tally: every verdict is UNDEFINED");
  }
  Tally result;
  result.quant_frac = static_cast<double>(quant) / static_cast<double>(total);
  result.orig_frac = static_cast<double>(orig) / static_cast<double>(total);
  result.tie_frac = static_cast<double>(tie) / static_cast<double>(total);
  return result;
}

}  // namespace qrbench
