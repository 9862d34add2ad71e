//
// Copyright 2026 The dpngram Authors.
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

#ifndef DPNGRAM_REPORT_H_
#define DPNGRAM_REPORT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpngram/audit.h"
#include "dpngram/corpus.h"
#include "dpngram/dpne.h"

namespace dpngram {

inline constexpr int kReportFormatVersion = 1;

struct LevelSummary {
  int level = 0;
  std::size_t released = 0;
  std::size_t genuine = 0;
  std::size_t spurious = 0;
  std::size_t structural_count = 0;
  std::size_t candidate_count = 0;
  std::size_t observed = 0;
  std::size_t imputed_margins = 0;
  double rho_base = 0.0;
  double sigma = 0.0;
  std::vector<std::string> ngrams;  // space-joined, only when requested

  friend bool operator==(const LevelSummary&, const LevelSummary&) = default;
};

struct ReleaseReport {
  int format_version = kReportFormatVersion;
  DpneConfig config;
  double sigma_star = 0.0;
  double sigma_per_level = 0.0;
  std::vector<LevelSummary> levels;
  double wall_clock_seconds = 0.0;

  std::size_t TotalReleased() const;
};

ReleaseReport MakeReleaseReport(const DpneResult& result,
                                const DpneConfig& config,
                                const Vocabulary& vocab,
                                double wall_clock_seconds,
                                bool include_ngrams = false);

std::string ReportToJson(const ReleaseReport& report);
absl::StatusOr<ReleaseReport> ReportFromJson(absl::string_view text);
absl::Status SaveReport(const ReleaseReport& report, const std::string& path);
absl::StatusOr<ReleaseReport> LoadReport(const std::string& path);

// Config documents: a bare config object or a report carrying "config".
// Fields present in the document overwrite `config`; others are kept, so
// defaults, file and flags can be layered. Unknown fields are rejected.
// An infinite fip_tolerance is written as the string "inf".
std::string DpneConfigToJson(const DpneConfig& config);
absl::Status MergeDpneConfigJson(absl::string_view text, DpneConfig& config);

std::string AuditRecordToJson(const AuditRecord& record);

}  // namespace dpngram

#endif  // DPNGRAM_REPORT_H_
