//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_APP_COMMANDS_H_
#define MSBENCH_APP_COMMANDS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msbench/data/dataset.h"
#include "msbench/eval/aggregate.h"
#include "msbench/llm/gateway.h"

namespace msbench::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitDataError = 1,
  kExitUsage = 2,
  kExitProvider = 3,
};

struct RunConfig {
  std::filesystem::path dataset_path;
  std::filesystem::path template_path;  // empty: built-in template
  std::filesystem::path run_dir = "msbench-run";
  llm::ProviderConfig provider;
  std::string provider_spec = "http";  // or "mock:<dir>"
  int k = 10;
  double mces_budget = 1.0;  // seconds per pair
  int fp_radius = 2;
  int fp_nbits = 2048;
  std::optional<data::Split> split = data::Split::kTest;  // nullopt: all
  int eval_threads = 0;  // 0: one per hardware thread
};

/// Raised when a run directory holds no transcripts directory.
class MissingTranscripts: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EvaluateResult {
  std::vector<eval::PerSpectrumMetrics> metrics;
  std::vector<eval::CotAudit> audits;
  eval::AggregateReport report;
  int missing_transcripts = 0;  // scored as empty responses
  std::filesystem::path reports_dir;
};

/// Validates the dataset and prints the load report.
data::LoadReport cmd_ingest(const RunConfig &config, std::ostream &out);

/// Renders prompts for the selected split and completes them through the
/// gateway. Rerunning reuses the cache.
std::vector<llm::CompletionOutcome> cmd_run(const RunConfig &config, std::ostream &out);

/// Scores stored transcripts and writes `reports/` under the run directory:
/// per_spectrum.csv, cot_audit.csv, aggregate.csv, aggregate.json, bins.csv.
EvaluateResult cmd_evaluate(const RunConfig &config, std::ostream &out);

/// cmd_evaluate plus the summary table on `out`.
EvaluateResult cmd_report(const RunConfig &config, std::ostream &out);

/// Prints common_edges, dissimilarity and optimal. Throws chem::ChemError.
similarity::McesResult cmd_mces(const std::string &smiles_a, const std::string &smiles_b,
                                double budget_seconds, std::ostream &out);

/// Parses and scores every (record, transcript) pair on `threads` threads;
/// output order follows the input.
void score_all(std::span<const data::SpectrumRecord> records,
               std::span<const std::string> transcripts, const eval::ScoringOptions &options,
               int threads, std::vector<eval::PerSpectrumMetrics> &metrics,
               std::vector<eval::CotAudit> &audits);

class UsageError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A parsed command line. Values come from flags, then the --config file,
/// then defaults.
struct CliRequest {
  std::string command;  // ingest, run, evaluate, report, mces; empty for help
  RunConfig config;
  std::string smiles_a;
  std::string smiles_b;
  std::string help_text;
};

/// Throws UsageError with the diagnostic and help text.
CliRequest parse_command_line(int argc, const char *const *argv);

/// Command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace msbench::app

#endif // MSBENCH_APP_COMMANDS_H_
