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

#ifndef QRBENCH_METRICS_HPP_
#define QRBENCH_METRICS_HPP_

#include <optional>
#include <vector>

namespace qrbench {

/// pass@1 under the clean condition and one attacked condition, both in
/// [0,1].
struct ConditionScores {
  double clean = 0.0;
  double attacked = 0.0;
};

/// Relative performance degradation (clean - attacked) / clean. Negative
/// means the model improved under attack.
/// Throws DomainError when clean == 0 (degradation from zero is undefined)
/// or when either score leaves [0,1].
double percent_delta(const ConditionScores& scores);

enum class RobustnessCategory {
  kQuantMoreRobust,
  kOrigMoreRobust,
  kTie,
  kUndefined,  // reserved for missing data; never produced by rrs()
};

/// Deltas below this are treated as "no degradation" in the decision table.
inline constexpr double kDeltaTolerance = 1e-9;
/// |rrs - 1| within this is a tie.
inline constexpr double kRrsTieTolerance = 1e-6;

struct RobustnessVerdict {
  RobustnessCategory category = RobustnessCategory::kUndefined;
  /// Present iff both deltas exceed kDeltaTolerance (the only regime where
  /// the ratio is meaningful); mixed-sign and undamaged cases carry a
  /// category only.
  std::optional<double> rrs;
  double delta_orig = 0.0;
  double delta_quant = 0.0;

  static RobustnessVerdict undefined() { return RobustnessVerdict{}; }
};

/// Relative Robustness Score with the full degenerate-case decision table
/// (tolerance tau = kDeltaTolerance on deltas d_o = orig.clean -
/// orig.attacked and d_q = quant.clean - quant.attacked):
///
///   1. d_o > tau and d_q > tau   -> rrs = d_o / d_q; rrs > 1 quantized more
///      robust, rrs < 1 original more robust, |rrs - 1| <= kRrsTieTolerance
///      tie.
///   2. d_q <= tau <  d_o         -> quantized more robust (original damaged,
///      quantized unharmed or improved; covers the negative-ratio case).
///   3. d_o <= tau <  d_q         -> original more robust (mirror of 2).
///   4. |d_o| <= tau and |d_q| <= tau -> tie (neither model damaged).
///   5. otherwise (at least one model improved, none damaged): the larger
///      improvement wins; improvement difference within tau -> tie.
///
/// Never throws: every score combination maps to a category.
RobustnessVerdict rrs(const ConditionScores& orig,
                      const ConditionScores& quant);

struct Tally {
  double quant_frac = 0.0;
  double orig_frac = 0.0;
  double tie_frac = 0.0;
};

/// Fractions of each category over the non-UNDEFINED verdicts; they sum to
/// 1 within 1e-12. Throws DomainError on an empty list or when every
/// verdict is UNDEFINED.
Tally tally(const std::vector<RobustnessVerdict>& verdicts);

}  // namespace qrbench

#endif  // QRBENCH_METRICS_HPP_
