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

#ifndef QRBENCH_REPORT_HPP_
#define QRBENCH_REPORT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrbench/metrics.hpp"
#include "qrbench/plan.hpp"

namespace qrbench {

/// One comparison cell: FULL vs one quantized precision, for one
/// (model, dataset, attack).
struct RrsCell {
  std::string model_ref;
  std::string size_label;
  std::string quant_precision;
  std::string dataset_id;
  std::string attack_label;    // full condition label
  std::string attack_display;  // "Ch" / "W" / "S" (+seed when ambiguous)
  RobustnessVerdict verdict;   // category kUndefined when data is missing
  // Record ids backing the four pass@1 numbers (empty when missing).
  std::string orig_clean_id, orig_attack_id;
  std::string quant_clean_id, quant_attack_id;
};

struct RrsTable {
  std::vector<RrsCell> cells;                       // row-major
  std::vector<std::string> row_keys;                // display order
  std::vector<std::string> column_keys;             // display order
  std::optional<Tally> tally;                       // over defined cells
  std::size_t defined_cells = 0;
  std::vector<std::string> warnings;
};

/// Pairs clean/attacked records at FULL and each quantized precision into
/// verdict cells. Cells missing any of their four pass@1 inputs are
/// UNDEFINED and logged as warnings.
RrsTable build_rrs_table(const std::vector<RunRecord>& records);

/// Renders one cell: "1.092 v" (numeric rrs with direction marker),
/// marker only for degenerate cases, "--" for UNDEFINED. ASCII markers are
/// "v" (quantized more robust), "^" (original more robust), "=" (degenerate
/// tie); rich rendering uses arrows.
std::string render_rrs_cell(const RobustnessVerdict& verdict, bool ascii);

std::string render_rrs_table_text(const RrsTable& table);
std::string render_rrs_table_markdown(const RrsTable& table);

struct NoiseCurvePoint {
  std::string model_ref;
  std::string size_label;
  std::string precision;
  std::string dataset_id;
  std::string family;  // "gaussian" | "uniform"
  double level = 0.0;  // 0 = clean baseline
  double pass1 = 0.0;
  std::string record_id;
};

struct NoiseCurves {
  std::vector<NoiseCurvePoint> points;  // sorted, clean rows per family
  std::vector<std::string> warnings;
};

NoiseCurves build_noise_curves(const std::vector<RunRecord>& records);

std::string noise_curves_csv(const NoiseCurves& curves);

/// One chart per (model, dataset, family), series per precision, log-scaled
/// level axis with the clean baseline pinned left. Returns nothing when the
/// data spans fewer than two nonzero noise levels (the notice lands in
/// warnings).
std::optional<std::string> render_noise_svg(const NoiseCurves& curves,
                                            const std::string& model_ref,
                                            const std::string& dataset_id,
                                            const std::string& family);

struct ReportArtifacts {
  std::filesystem::path table_txt;
  std::filesystem::path table_md;
  std::filesystem::path verdicts_jsonl;
  std::filesystem::path noise_csv;
  std::vector<std::filesystem::path> noise_svgs;
  std::vector<std::string> warnings;
};

/// Writes every report artifact under `reports_dir`. Deterministic: the
/// same records produce byte-identical files.
ReportArtifacts write_reports(const std::vector<RunRecord>& records,
                              const std::filesystem::path& reports_dir);

}  // namespace qrbench

#endif  // QRBENCH_REPORT_HPP_
