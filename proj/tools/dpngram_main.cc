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

// Command-line front end for the dpngram library.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dpngram/audit.h"
#include "dpngram/calibration.h"
#include "dpngram/corpus.h"
#include "dpngram/dpne.h"
#include "dpngram/dpsu.h"
#include "dpngram/policy.h"
#include "dpngram/report.h"
#include "dpngram/synthetic.h"
#include "json.hpp"

namespace dpngram {
namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  std::uint64_t seed = 42;
  std::string output;
  std::string format = "json";
  int threads = 1;
};

// A command's result: a JSON document plus a flat table for --format csv.
struct Output {
  json document;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string Num(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

int Emit(const GlobalFlags& flags, const Output& output) {
  std::string text;
  if (flags.format == "csv") {
    text = absl::StrJoin(output.header, ",") + "\n";
    for (const auto& row : output.rows) text += absl::StrJoin(row, ",") + "\n";
  } else {
    text = output.document.dump(2) + "\n";
  }
  if (flags.output.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(flags.output);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << flags.output << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return kExitFailure;
}

double DeltaFrom(double delta, std::optional<double> delta_exp) {
  return delta_exp.has_value() ? std::exp(*delta_exp) : delta;
}

// Corpus from --input (NDJSON), --text (plain text) or the synthetic generator.
struct CorpusSource {
  std::string input;
  std::string text;
  std::size_t max_users = 0;
  std::string kind = "zipf";
  std::size_t users = 10000;
  std::size_t vocab = 500;
  std::uint64_t data_seed = 7;

  void Register(CLI::App* app) {
    app->add_option("--input", input, "Corpus in NDJSON format");
    app->add_option("--text", text, "Plain-text corpus, one user per line");
    app->add_option("--max-users", max_users,
                    "Cap on users read from --text (0 = all)");
    app->add_option("--kind", kind,
                    "Synthetic corpus kind when no file is given")
        ->check(CLI::IsMember({"zipf", "clustered", "heavy_tail"}));
    app->add_option("--users", users, "Synthetic corpus users");
    app->add_option("--vocab", vocab, "Synthetic corpus vocabulary size");
    app->add_option("--data-seed", data_seed, "Synthetic corpus seed");
  }

  absl::StatusOr<Corpus> Load() const {
    if (!input.empty()) return LoadCorpus(input);
    if (!text.empty()) return LoadPlainTextCorpus(text, max_users);
    absl::StatusOr<CorpusKind> parsed = ParseCorpusKind(kind);
    if (!parsed.ok()) return parsed.status();
    return GenerateCorpus(*parsed, users, vocab, data_seed);
  }
};

// DPNE parameters layered as defaults < --config file < flags.
struct DpneFlags {
  std::string config_path;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> delta_exp;
  std::optional<int> max_length;
  std::optional<int> bound;
  std::vector<int> bounds;
  std::optional<std::string> fip_tolerance;
  std::optional<double> gamma;
  std::optional<double> eta;
  bool noiseless = false;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path,
                    "Config or report document to start from");
    app->add_option("--eps", epsilon, "Privacy epsilon");
    app->add_option("--delta", delta, "Privacy delta");
    app->add_option("--delta-exp", delta_exp, "Set delta = e^x");
    app->add_option("--max-length", max_length, "Longest n-gram length T");
    app->add_option("--bound", bound, "Contribution bound for every level");
    app->add_option("--bounds", bounds, "Contribution bounds, one per level")
        ->delimiter(',');
    app->add_option("--fip-tolerance", fip_tolerance,
                    "Pruning tolerance m, or 'inf' to disable pruning");
    app->add_option("--gamma", gamma, "Threshold discount gamma");
    app->add_option("--eta", eta, "Spurious fraction eta");
    app->add_flag("--noiseless", noiseless,
                  "Zero noise and thresholds (not private)");
  }

  absl::StatusOr<DpneConfig> Build(std::uint64_t seed,
                                   bool seed_given) const {
    DpneConfig config = DpneConfig::WithUniformBound(100);
    config.seed = seed;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        return absl::NotFoundError(absl::StrCat("cannot open ", config_path));
      }
      std::stringstream buffer;
      buffer << in.rdbuf();
      if (absl::Status s = MergeDpneConfigJson(buffer.str(), config);
          !s.ok()) {
        return s;
      }
      if (seed_given) config.seed = seed;
    }
    if (epsilon) config.epsilon = *epsilon;
    if (delta) config.delta = *delta;
    if (delta_exp) config.delta = std::exp(*delta_exp);
    if (max_length) {
      config.max_length = *max_length;
      if (!bound && bounds.empty()) {
        const int fill = config.contribution_bounds.empty()
                             ? 100
                             : config.contribution_bounds.front();
        config.contribution_bounds.assign(std::max(*max_length, 0), fill);
      }
    }
    if (bound) config.contribution_bounds.assign(config.max_length, *bound);
    if (!bounds.empty()) config.contribution_bounds = bounds;
    if (fip_tolerance) {
      if (*fip_tolerance == "inf") {
        config.fip_tolerance = kNoPruning;
      } else {
        try {
          config.fip_tolerance = std::stod(*fip_tolerance);
        } catch (const std::exception&) {
          return absl::InvalidArgumentError(
              "--fip-tolerance must be a number or 'inf'");
        }
      }
    }
    if (gamma) config.ht_discount = *gamma;
    if (eta) config.spurious_fraction = *eta;
    if (noiseless) config.noiseless = true;
    if (absl::Status s = config.Validate(); !s.ok()) return s;
    return config;
  }
};

int RunCalibrate(const GlobalFlags& flags, double epsilon, double delta,
                 int delta0, int levels) {
  absl::StatusOr<PrivacyParams> params =
      PrivacyParams::Create(epsilon, delta, 1.0, levels);
  if (!params.ok()) return Fail(params.status());
  absl::StatusOr<CalibrationResult> calibration = Calibrate(*params);
  if (!calibration.ok()) return Fail(calibration.status());
  absl::StatusOr<double> rho1 =
      Rho1(calibration->sigma_per_level, params->delta_spill, delta0);
  if (!rho1.ok()) return Fail(rho1.status());
  absl::StatusOr<PolicyGaussianThresholds> pg =
      RhoPolicyGaussian(epsilon, delta, delta0);
  if (!pg.ok()) return Fail(pg.status());
  Output out;
  out.document = {{"epsilon", epsilon},
                  {"delta", delta},
                  {"delta0", delta0},
                  {"levels", levels},
                  {"sigma_star", calibration->sigma_star},
                  {"sigma_per_level", calibration->sigma_per_level},
                  {"rho1", *rho1},
                  {"rho_pg", pg->rho_pg},
                  {"rho_zero", pg->rho_zero},
                  {"surcharge", pg->surcharge()}};
  out.header = {"epsilon", "delta", "delta0", "levels", "sigma_star",
                "sigma_per_level", "rho1", "rho_pg", "rho_zero", "surcharge"};
  out.rows.push_back({Num(epsilon), Num(delta), Num(delta0), Num(levels),
                      Num(calibration->sigma_star),
                      Num(calibration->sigma_per_level), Num(*rho1),
                      Num(pg->rho_pg), Num(pg->rho_zero),
                      Num(pg->surcharge())});
  return Emit(flags, out);
}

int RunTableB1(const GlobalFlags& flags, double delta) {
  const std::vector<double> epsilons = {1, 3, 5, 8};
  const std::vector<int> delta0s = {10, 100};
  absl::StatusOr<std::vector<SurchargeRow>> table =
      SpilloverSurchargeTable(epsilons, delta0s, delta);
  if (!table.ok()) return Fail(table.status());
  Output out;
  out.document = json::array();
  out.header = {"epsilon", "delta0", "rho_pg", "rho_zero", "surcharge",
                "relative"};
  for (const SurchargeRow& row : *table) {
    out.document.push_back({{"epsilon", row.epsilon},
                            {"delta0", row.delta0},
                            {"rho_pg", row.rho_pg},
                            {"rho_zero", row.rho_zero},
                            {"surcharge", row.surcharge},
                            {"relative", row.relative}});
    out.rows.push_back({Num(row.epsilon), Num(row.delta0), Num(row.rho_pg),
                        Num(row.rho_zero), Num(row.surcharge),
                        Num(row.relative)});
  }
  return Emit(flags, out);
}

struct DpsuFlags {
  std::string input;
  std::size_t users = 20000;
  std::size_t universe = 50000;
  double epsilon = 1.0;
  double delta = kDefaultDelta;
  std::optional<double> delta_exp;
  int delta0 = 10;
  std::optional<double> cutoff;
  std::string policy = "l2";
  bool allow_nonprivate = false;
  bool list_items = false;
};

int RunDpsu(const GlobalFlags& flags, const DpsuFlags& dpsu) {
  std::vector<std::vector<ItemId>> item_sets;
  const Vocabulary* vocab = nullptr;
  Corpus corpus;
  if (!dpsu.input.empty()) {
    absl::StatusOr<Corpus> loaded = LoadCorpus(dpsu.input);
    if (!loaded.ok()) return Fail(loaded.status());
    corpus = *std::move(loaded);
    item_sets = corpus.ItemSets();
    vocab = &corpus.vocab;
  } else {
    absl::StatusOr<std::vector<std::vector<std::uint32_t>>> sets =
        GenerateZipfItemSets(dpsu.users, dpsu.universe, flags.seed);
    if (!sets.ok()) return Fail(sets.status());
    item_sets = *std::move(sets);
  }
  DpsuOptions options;
  options.epsilon = dpsu.epsilon;
  options.delta = DeltaFrom(dpsu.delta, dpsu.delta_exp);
  options.contribution_bound = dpsu.delta0;
  options.cutoff = dpsu.cutoff;
  options.policy =
      dpsu.policy == "l1" ? UpdatePolicy::kL1Descent : UpdatePolicy::kL2Descent;
  options.allow_nonprivate = dpsu.allow_nonprivate;
  options.seed = flags.seed;
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<DpsuRelease> release = RunPolicyGaussian(item_sets, options);
  if (!release.ok()) return Fail(release.status());
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  Output out;
  out.document = {{"policy", std::string(PolicyName(options.policy))},
                  {"private", release->private_guarantee},
                  {"users", item_sets.size()},
                  {"support_size", release->support_size},
                  {"released", release->released.size()},
                  {"sigma", release->sigma},
                  {"rho_pg", release->rho},
                  {"cutoff", release->cutoff},
                  {"wall_clock_seconds", seconds}};
  if (dpsu.list_items) {
    json items = json::array();
    for (ItemId item : release->released) {
      if (vocab != nullptr && item < vocab->size()) {
        items.push_back(vocab->Word(item));
      } else {
        items.push_back(item);
      }
    }
    out.document["items"] = std::move(items);
  }
  out.header = {"policy", "private", "users", "support_size", "released",
                "sigma", "rho_pg", "cutoff"};
  out.rows.push_back({std::string(PolicyName(options.policy)),
                      release->private_guarantee ? "true" : "false",
                      Num(item_sets.size()), Num(release->support_size),
                      Num(release->released.size()), Num(release->sigma),
                      Num(release->rho), Num(release->cutoff)});
  return Emit(flags, out);
}

int RunDpne(const GlobalFlags& flags, const CorpusSource& source,
            const DpneFlags& dpne, bool seed_given, bool include_ngrams) {
  absl::StatusOr<DpneConfig> config = dpne.Build(flags.seed, seed_given);
  if (!config.ok()) return Fail(config.status());
  absl::StatusOr<Corpus> corpus = source.Load();
  if (!corpus.ok()) return Fail(corpus.status());
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<DpneResult> result = RunAfpDpne(*corpus, *config);
  if (!result.ok()) return Fail(result.status());
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  const ReleaseReport report = MakeReleaseReport(
      *result, *config, corpus->vocab, seconds, include_ngrams);
  Output out;
  out.document = json::parse(ReportToJson(report));
  out.header = {"level",    "released",        "genuine",  "spurious",
                "structural_count", "candidate_count", "rho_base", "sigma"};
  for (const LevelSummary& level : report.levels) {
    out.rows.push_back({Num(level.level), Num(level.released),
                        Num(level.genuine), Num(level.spurious),
                        Num(level.structural_count),
                        Num(level.candidate_count), Num(level.rho_base),
                        Num(level.sigma)});
  }
  return Emit(flags, out);
}

int RunL1Counterexample(const GlobalFlags& flags) {
  const CounterexampleTrace trace = L1CounterexampleTrace();
  Output out;
  json steps = json::array();
  out.header = {"user", "extra_user", "items", "h1_a", "h1_b", "h1_c",
                "h2_a", "h2_b", "h2_c", "diff_norm"};
  for (const CounterexampleStep& step : trace.steps) {
    std::string items;
    for (ItemId item : step.items) items.push_back(static_cast<char>('a' + item));
    steps.push_back({{"user", step.user},
                     {"extra_user", step.extra_user},
                     {"items", items},
                     {"with_extra", step.with_extra},
                     {"without_extra", step.without_extra},
                     {"diff_norm", step.diff_norm}});
    out.rows.push_back({Num(step.user), step.extra_user ? "true" : "false",
                        items, Num(step.with_extra[0]),
                        Num(step.with_extra[1]), Num(step.with_extra[2]),
                        Num(step.without_extra[0]),
                        Num(step.without_extra[1]),
                        Num(step.without_extra[2]), Num(step.diff_norm)});
  }
  out.document = {{"diff", trace.diff},
                  {"diff_norm", trace.diff_norm},
                  {"expands", trace.diff_norm > 1.0},
                  {"steps", std::move(steps)}};
  const int code = Emit(flags, out);
  if (code != kExitOk) return code;
  std::cerr << "||H1 - H2||_2 = " << Num(trace.diff_norm) << "\n";
  return trace.diff_norm > 1.0 ? kExitOk : kExitFailure;
}

int RunAdaptive(const GlobalFlags& flags, double sigma, double rho,
                int delta0, std::optional<double> discount) {
  absl::StatusOr<AdaptiveCounterexample> result =
      AdaptiveCounterexampleRatio(sigma, rho, delta0, discount);
  if (!result.ok()) return Fail(result.status());
  Output out;
  out.document = {{"sigma", sigma},
                  {"rho", rho},
                  {"delta0", delta0},
                  {"discount", discount.value_or(rho / 2)},
                  {"p_in", result->p_in},
                  {"p_out", result->p_out},
                  {"ratio", result->ratio},
                  {"log_ratio", std::log(result->ratio)},
                  {"uniform_ratio", result->uniform_ratio}};
  out.header = {"sigma", "rho", "delta0", "p_in", "p_out", "ratio",
                "uniform_ratio"};
  out.rows.push_back({Num(sigma), Num(rho), Num(delta0), Num(result->p_in),
                      Num(result->p_out), Num(result->ratio),
                      Num(result->uniform_ratio)});
  return Emit(flags, out);
}

int RunAuditCommand(const GlobalFlags& flags, const CorpusSource& source,
                    const DpneFlags& dpne, bool seed_given,
                    AuditOptions options) {
  absl::StatusOr<DpneConfig> config = dpne.Build(flags.seed, seed_given);
  if (!config.ok()) return Fail(config.status());
  absl::StatusOr<Corpus> corpus = source.Load();
  if (!corpus.ok()) return Fail(corpus.status());
  options.seed = flags.seed;
  options.threads = flags.threads;
  absl::StatusOr<AuditRecord> record = RunAudit(*corpus, *config, options);
  if (!record.ok()) return Fail(record.status());
  Output out;
  out.document = json::parse(AuditRecordToJson(*record));
  out.header = {"epsilon", "m", "runs", "correct", "total_guesses",
                "correct_fraction", "p_value", "verdict"};
  out.rows.push_back({Num(record->epsilon), Num(record->m), Num(record->runs),
                      Num(record->correct), Num(record->total_guesses),
                      Num(record->CorrectFraction()), Num(record->p_value),
                      record->pass ? "PASS" : "FAIL"});
  return Emit(flags, out);
}

int RunGenData(const GlobalFlags& flags, const std::string& kind,
               std::size_t users, std::size_t vocab,
               const SyntheticKnobs& knobs) {
  absl::StatusOr<CorpusKind> parsed = ParseCorpusKind(kind);
  if (!parsed.ok()) return Fail(parsed.status());
  absl::StatusOr<Corpus> corpus =
      GenerateCorpus(*parsed, users, vocab, flags.seed, knobs);
  if (!corpus.ok()) return Fail(corpus.status());
  if (flags.output.empty()) {
    return Fail(absl::InvalidArgumentError("gen-data needs --output"));
  }
  if (absl::Status s = SaveCorpus(*corpus, flags.output); !s.ok()) {
    return Fail(s);
  }
  std::cerr << "wrote " << corpus->users.size() << " users to "
            << flags.output << "\n";
  return kExitOk;
}

int RunEquivTest(const GlobalFlags& flags, int trials, double min_p) {
  Output out;
  out.document = json::array();
  out.header = {"case", "statistic", "dof", "p_value"};
  bool all_pass = true;
  const std::vector<EquivalenceCase> cases = DefaultEquivalenceCases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    absl::StatusOr<EquivalenceResult> result =
        RunEquivalenceTest(cases[i], trials, MixSeed(flags.seed, i));
    if (!result.ok()) return Fail(result.status());
    all_pass = all_pass && result->p_value > min_p;
    out.document.push_back({{"case", i},
                            {"candidates", cases[i].thresholds.size()},
                            {"statistic", result->statistic},
                            {"degrees_of_freedom",
                             result->degrees_of_freedom},
                            {"p_value", result->p_value}});
    out.rows.push_back({Num(i), Num(result->statistic),
                        Num(result->degrees_of_freedom),
                        Num(result->p_value)});
  }
  const int code = Emit(flags, out);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitFailure;
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private set union and n-gram extraction"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  CLI::Option* seed_option =
      app.add_option("--seed", flags.seed, "Random seed")->capture_default_str();
  app.add_option("--output", flags.output, "Write output to this file");
  app.add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  double cal_eps = 1.0;
  double cal_delta = kDefaultDelta;
  std::optional<double> cal_delta_exp;
  int cal_delta0 = 1;
  int cal_levels = 1;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Noise scale and thresholds");
  calibrate->add_option("--eps", cal_eps, "Privacy epsilon")->required();
  calibrate->add_option("--delta", cal_delta, "Privacy delta");
  calibrate->add_option("--delta-exp", cal_delta_exp, "Set delta = e^x");
  calibrate->add_option("--delta0", cal_delta0, "Contribution bound");
  calibrate->add_option("--levels", cal_levels, "Composed levels");

  double table_delta = kDefaultDelta;
  std::optional<double> table_delta_exp;
  CLI::App* table =
      app.add_subcommand("table-b1", "Spillover surcharge table");
  table->add_option("--delta", table_delta, "Privacy delta");
  table->add_option("--delta-exp", table_delta_exp, "Set delta = e^x");

  DpsuFlags dpsu_flags;
  CLI::App* dpsu = app.add_subcommand("dpsu", "Set union");
  dpsu->require_subcommand(1);
  dpsu->fallthrough();
  CLI::App* dpsu_run = dpsu->add_subcommand("run", "Policy Gaussian set union");
  dpsu_run->add_option("--input", dpsu_flags.input,
                       "Corpus in NDJSON format (default: synthetic sets)");
  dpsu_run->add_option("--users", dpsu_flags.users, "Synthetic users");
  dpsu_run->add_option("--universe", dpsu_flags.universe,
                       "Synthetic item universe");
  dpsu_run->add_option("--eps", dpsu_flags.epsilon, "Privacy epsilon");
  dpsu_run->add_option("--delta", dpsu_flags.delta, "Privacy delta");
  dpsu_run->add_option("--delta-exp", dpsu_flags.delta_exp, "Set delta = e^x");
  dpsu_run->add_option("--delta0", dpsu_flags.delta0, "Contribution bound");
  dpsu_run->add_option("--cutoff", dpsu_flags.cutoff, "Policy cutoff Gamma");
  dpsu_run->add_option("--policy", dpsu_flags.policy, "Update policy")
      ->check(CLI::IsMember({"l1", "l2"}));
  dpsu_run->add_flag("--allow-nonprivate", dpsu_flags.allow_nonprivate,
                     "Permit the l1 policy (no privacy guarantee)");
  dpsu_run->add_flag("--list-items", dpsu_flags.list_items,
                     "Include released items in the output");

  CorpusSource dpne_source;
  DpneFlags dpne_flags;
  bool include_ngrams = false;
  CLI::App* dpne = app.add_subcommand("dpne", "N-gram extraction");
  dpne->require_subcommand(1);
  dpne->fallthrough();
  CLI::App* dpne_run = dpne->add_subcommand("run", "Run AFP-DPNE");
  dpne_source.Register(dpne_run);
  dpne_flags.Register(dpne_run);
  dpne_run->add_flag("--include-ngrams", include_ngrams,
                     "List released n-grams in the report");

  CLI::App* counterexample =
      app.add_subcommand("counterexample", "Counterexample calculators");
  counterexample->require_subcommand(1);
  counterexample->fallthrough();
  CLI::App* l1 = counterexample->add_subcommand(
      "l1-descent", "Replay the l1-descent expansion trace");
  double adaptive_sigma = 2.54;
  double adaptive_rho = 10.0;
  int adaptive_delta0 = 100;
  std::optional<double> adaptive_discount;
  CLI::App* adaptive = counterexample->add_subcommand(
      "adaptive", "Privacy loss of support-dependent thresholds");
  adaptive->add_option("--sigma", adaptive_sigma, "Noise scale")
      ->capture_default_str();
  adaptive->add_option("--rho", adaptive_rho, "Base threshold")
      ->capture_default_str();
  adaptive->add_option("--delta0", adaptive_delta0, "Contribution bound")
      ->capture_default_str();
  adaptive->add_option("--discount", adaptive_discount,
                       "Threshold discount (default rho / 2)");

  CorpusSource audit_source;
  DpneFlags audit_dpne;
  AuditOptions audit_options;
  CLI::App* audit = app.add_subcommand("audit", "One-run privacy audit");
  audit_source.Register(audit);
  audit_dpne.Register(audit);
  audit->add_option("--canaries", audit_options.canaries,
                    "Canaries per run")
      ->capture_default_str();
  audit->add_option("--runs", audit_options.runs, "Independent runs")
      ->capture_default_str();
  audit->add_option("--guesses", audit_options.guesses,
                    "Guesses per run (default canaries / 2)");
  audit->add_option("--fixed-alpha", audit_options.fixed_alpha,
                    "Use this alpha in the 2 m delta alpha term");

  std::string gen_kind = "zipf";
  std::size_t gen_users = 1000;
  std::size_t gen_vocab = 500;
  SyntheticKnobs knobs;
  CLI::App* gen = app.add_subcommand("gen-data", "Write a synthetic corpus");
  gen->add_option("--kind", gen_kind, "zipf, clustered or heavy_tail")
      ->check(CLI::IsMember({"zipf", "clustered", "heavy_tail"}));
  gen->add_option("--users", gen_users, "Users")->capture_default_str();
  gen->add_option("--vocab", gen_vocab, "Vocabulary size")
      ->capture_default_str();
  gen->add_option("--exponent", knobs.exponent, "Rank-frequency exponent");
  gen->add_option("--min-length", knobs.min_length, "Shortest user text");
  gen->add_option("--max-length", knobs.max_length, "Longest user text");
  gen->add_option("--locality", knobs.locality, "Local move probability");
  gen->add_option("--window", knobs.window, "Local move width in ranks");
  gen->add_option("--topics", knobs.topics, "Topics (clustered)");
  gen->add_option("--phrase-probability", knobs.phrase_probability,
                  "Phrase emission probability (clustered)");

  int equiv_trials = 100000;
  double equiv_min_p = 0.01;
  CLI::App* equiv = app.add_subcommand(
      "equiv-test", "Efficient vs dense level sampler, chi-square");
  equiv->add_option("--trials", equiv_trials, "Trials per configuration")
      ->capture_default_str();
  equiv->add_option("--min-p", equiv_min_p, "Fail at or below this p-value")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const bool seed_given = seed_option->count() > 0;
  if (*calibrate) {
    return RunCalibrate(flags, cal_eps, DeltaFrom(cal_delta, cal_delta_exp),
                        cal_delta0, cal_levels);
  }
  if (*table) {
    return RunTableB1(flags, DeltaFrom(table_delta, table_delta_exp));
  }
  if (*dpsu_run) return RunDpsu(flags, dpsu_flags);
  if (*dpne_run) {
    return RunDpne(flags, dpne_source, dpne_flags, seed_given, include_ngrams);
  }
  if (*l1) return RunL1Counterexample(flags);
  if (*adaptive) {
    return RunAdaptive(flags, adaptive_sigma, adaptive_rho, adaptive_delta0,
                       adaptive_discount);
  }
  if (*audit) {
    return RunAuditCommand(flags, audit_source, audit_dpne, seed_given,
                           audit_options);
  }
  if (*gen) return RunGenData(flags, gen_kind, gen_users, gen_vocab, knobs);
  if (*equiv) return RunEquivTest(flags, equiv_trials, equiv_min_p);
  return kExitUsage;
}

}  // namespace
}  // namespace dpngram

int main(int argc, char** argv) { return dpngram::Main(argc, argv); }
