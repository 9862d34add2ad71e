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

#include "dpngram/report.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dpngram/ngram.h"
#include "json.hpp"

namespace dpngram {
namespace {

using json = nlohmann::json;

json ConfigObject(const DpneConfig& config) {
  json tolerance = std::isinf(config.fip_tolerance)
                       ? json("inf")
                       : json(config.fip_tolerance);
  return json{{"max_length", config.max_length},
              {"contribution_bounds", config.contribution_bounds},
              {"epsilon", config.epsilon},
              {"delta", config.delta},
              {"fip_tolerance", std::move(tolerance)},
              {"ht_discount", config.ht_discount},
              {"spurious_fraction", config.spurious_fraction},
              {"seed", config.seed},
              {"noiseless", config.noiseless}};
}

absl::Status ReadNumber(const json& object, const char* key, double& out) {
  if (!object.contains(key)) return absl::OkStatus();
  const json& value = object.at(key);
  if (!value.is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config field '", key, "' must be a number"));
  }
  out = value.get<double>();
  return absl::OkStatus();
}

absl::Status MergeConfigObject(const json& object, DpneConfig& config) {
  if (!object.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  static constexpr const char* kKnown[] = {
      "max_length",  "contribution_bounds", "epsilon",
      "delta",       "fip_tolerance",       "ht_discount",
      "spurious_fraction", "seed",          "noiseless"};
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : kKnown) known = known || key == name;
    if (!known) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config field '", key, "'"));
    }
  }
  if (object.contains("max_length")) {
    if (!object["max_length"].is_number_integer()) {
      return absl::InvalidArgumentError("max_length must be an integer");
    }
    config.max_length = object["max_length"].get<int>();
  }
  if (object.contains("contribution_bounds")) {
    const json& bounds = object["contribution_bounds"];
    if (!bounds.is_array()) {
      return absl::InvalidArgumentError(
          "contribution_bounds must be an array of integers");
    }
    config.contribution_bounds.clear();
    for (const json& bound : bounds) {
      if (!bound.is_number_integer()) {
        return absl::InvalidArgumentError(
            "contribution_bounds must be an array of integers");
      }
      config.contribution_bounds.push_back(bound.get<int>());
    }
  }
  if (absl::Status s = ReadNumber(object, "epsilon", config.epsilon); !s.ok()) {
    return s;
  }
  if (absl::Status s = ReadNumber(object, "delta", config.delta); !s.ok()) {
    return s;
  }
  if (object.contains("fip_tolerance") &&
      object["fip_tolerance"].is_string()) {
    if (object["fip_tolerance"].get<std::string>() != "inf") {
      return absl::InvalidArgumentError(
          "fip_tolerance must be a number or \"inf\"");
    }
    config.fip_tolerance = kNoPruning;
  } else if (absl::Status s =
                 ReadNumber(object, "fip_tolerance", config.fip_tolerance);
             !s.ok()) {
    return s;
  }
  if (absl::Status s = ReadNumber(object, "ht_discount", config.ht_discount);
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          ReadNumber(object, "spurious_fraction", config.spurious_fraction);
      !s.ok()) {
    return s;
  }
  if (object.contains("seed")) {
    if (!object["seed"].is_number_unsigned()) {
      return absl::InvalidArgumentError("seed must be a non-negative integer");
    }
    config.seed = object["seed"].get<std::uint64_t>();
  }
  if (object.contains("noiseless")) {
    if (!object["noiseless"].is_boolean()) {
      return absl::InvalidArgumentError("noiseless must be a boolean");
    }
    config.noiseless = object["noiseless"].get<bool>();
  }
  return absl::OkStatus();
}

// Reads a non-negative integer field; sets `error` on failure.
std::size_t Count(const json& object, const char* key, absl::Status& error) {
  if (!object.contains(key) || !object[key].is_number_unsigned()) {
    if (error.ok()) {
      error = absl::DataLossError(
          absl::StrCat("report level is missing count '", key, "'"));
    }
    return 0;
  }
  return object[key].get<std::size_t>();
}

double Real(const json& object, const char* key, absl::Status& error) {
  if (!object.contains(key) || !object[key].is_number()) {
    if (error.ok()) {
      error = absl::DataLossError(
          absl::StrCat("report is missing number '", key, "'"));
    }
    return 0.0;
  }
  return object[key].get<double>();
}

}  // namespace

std::size_t ReleaseReport::TotalReleased() const {
  std::size_t total = 0;
  for (const LevelSummary& level : levels) total += level.released;
  return total;
}

ReleaseReport MakeReleaseReport(const DpneResult& result,
                                const DpneConfig& config,
                                const Vocabulary& vocab,
                                double wall_clock_seconds,
                                bool include_ngrams) {
  ReleaseReport report;
  report.config = config;
  report.sigma_star = result.sigma_star;
  report.sigma_per_level = result.sigma_per_level;
  report.wall_clock_seconds = wall_clock_seconds;
  for (const LevelRelease& level : result.levels) {
    LevelSummary summary;
    summary.level = level.level;
    summary.released = level.released.size();
    summary.genuine = level.diagnostics.genuine;
    summary.spurious = level.diagnostics.spurious;
    summary.structural_count = level.structural_count;
    summary.candidate_count = level.candidate_count;
    summary.observed = level.diagnostics.observed;
    summary.imputed_margins = level.diagnostics.imputed_margins;
    summary.rho_base = level.rho_base;
    summary.sigma = level.sigma;
    if (include_ngrams) {
      for (const NGram& gram : level.released) {
        summary.ngrams.push_back(FormatNGram(gram, vocab));
      }
    }
    report.levels.push_back(std::move(summary));
  }
  return report;
}

std::string ReportToJson(const ReleaseReport& report) {
  json levels = json::array();
  for (const LevelSummary& level : report.levels) {
    json entry{{"level", level.level},
               {"released", level.released},
               {"genuine", level.genuine},
               {"spurious", level.spurious},
               {"structural_count", level.structural_count},
               {"candidate_count", level.candidate_count},
               {"observed", level.observed},
               {"imputed_margins", level.imputed_margins},
               {"rho_base", level.rho_base},
               {"sigma", level.sigma}};
    if (!level.ngrams.empty()) entry["ngrams"] = level.ngrams;
    levels.push_back(std::move(entry));
  }
  json document{{"format_version", report.format_version},
                {"config", ConfigObject(report.config)},
                {"seed", report.config.seed},
                {"sigma_star", report.sigma_star},
                {"sigma_per_level", report.sigma_per_level},
                {"total_released", report.TotalReleased()},
                {"wall_clock_seconds", report.wall_clock_seconds},
                {"levels", std::move(levels)}};
  return document.dump(2);
}

absl::StatusOr<ReleaseReport> ReportFromJson(absl::string_view text) {
  const json document = json::parse(text.begin(), text.end(), nullptr,
                                    /*allow_exceptions=*/false);
  if (document.is_discarded() || !document.is_object()) {
    return absl::DataLossError("report is not a JSON object");
  }
  if (!document.contains("format_version") ||
      !document["format_version"].is_number_integer()) {
    return absl::DataLossError("report has no format_version");
  }
  ReleaseReport report;
  report.format_version = document["format_version"].get<int>();
  if (report.format_version != kReportFormatVersion) {
    return absl::DataLossError(absl::StrCat(
        "unsupported report format_version ", report.format_version));
  }
  if (!document.contains("config")) {
    return absl::DataLossError("report has no config");
  }
  if (absl::Status s = MergeConfigObject(document["config"], report.config);
      !s.ok()) {
    return absl::DataLossError(s.message());
  }
  absl::Status error;
  report.sigma_star = Real(document, "sigma_star", error);
  report.sigma_per_level = Real(document, "sigma_per_level", error);
  report.wall_clock_seconds = Real(document, "wall_clock_seconds", error);
  if (!document.contains("levels") || !document["levels"].is_array()) {
    return absl::DataLossError("report has no levels array");
  }
  for (const json& entry : document["levels"]) {
    if (!entry.is_object()) return absl::DataLossError("level is not an object");
    LevelSummary level;
    if (!entry.contains("level") || !entry["level"].is_number_integer()) {
      return absl::DataLossError("level entry has no level number");
    }
    level.level = entry["level"].get<int>();
    level.released = Count(entry, "released", error);
    level.genuine = Count(entry, "genuine", error);
    level.spurious = Count(entry, "spurious", error);
    level.structural_count = Count(entry, "structural_count", error);
    level.candidate_count = Count(entry, "candidate_count", error);
    level.observed = Count(entry, "observed", error);
    level.imputed_margins = Count(entry, "imputed_margins", error);
    level.rho_base = Real(entry, "rho_base", error);
    level.sigma = Real(entry, "sigma", error);
    if (entry.contains("ngrams")) {
      if (!entry["ngrams"].is_array()) {
        return absl::DataLossError("ngrams must be an array of strings");
      }
      for (const json& gram : entry["ngrams"]) {
        if (!gram.is_string()) {
          return absl::DataLossError("ngrams must be an array of strings");
        }
        level.ngrams.push_back(gram.get<std::string>());
      }
    }
    if (!error.ok()) return error;
    if (level.genuine + level.spurious != level.released) {
      return absl::DataLossError(absl::StrCat(
          "level ", level.level, ": genuine + spurious != released"));
    }
    report.levels.push_back(std::move(level));
  }
  if (!error.ok()) return error;
  return report;
}

absl::Status SaveReport(const ReleaseReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << ReportToJson(report) << '\n';
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<ReleaseReport> LoadReport(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ReportFromJson(buffer.str());
}

std::string DpneConfigToJson(const DpneConfig& config) {
  return ConfigObject(config).dump(2);
}

absl::Status MergeDpneConfigJson(absl::string_view text, DpneConfig& config) {
  const json document = json::parse(text.begin(), text.end(), nullptr,
                                    /*allow_exceptions=*/false);
  if (document.is_discarded() || !document.is_object()) {
    return absl::InvalidArgumentError("config is not a JSON object");
  }
  const json& object =
      document.contains("config") ? document["config"] : document;
  return MergeConfigObject(object, config);
}

std::string AuditRecordToJson(const AuditRecord& record) {
  json guesses = json::array();
  for (const Guess& guess : record.guesses) {
    guesses.push_back({{"index", guess.index}, {"included", guess.included}});
  }
  json document{{"format_version", kReportFormatVersion},
                {"m", record.m},
                {"runs", record.runs},
                {"epsilon", record.epsilon},
                {"delta", record.delta},
                {"correct", record.correct},
                {"total_guesses", record.total_guesses},
                {"correct_fraction", record.CorrectFraction()},
                {"p_value", record.p_value},
                {"verdict", record.pass ? "PASS" : "FAIL"},
                {"inclusion_bits", record.inclusion_bits},
                {"scores", record.scores},
                {"guesses", std::move(guesses)}};
  return document.dump(2);
}

}  // namespace dpngram
