//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/app/commands.h"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "msbench/chem/molecule.h"
#include "msbench/protocol/prompt.h"
#include "msbench/protocol/response.h"
#include "msbench/util/parallel.h"

namespace msbench::app {
namespace {

data::Dataset load(const RunConfig &config) {
  return data::load_dataset(config.dataset_path, config.split);
}

protocol::PromptTemplate load_template(const RunConfig &config) {
  if (config.template_path.empty())
    return protocol::PromptTemplate::builtin();
  return protocol::PromptTemplate::load(config.template_path);
}

eval::ScoringOptions scoring_options(const RunConfig &config) {
  eval::ScoringOptions o;
  o.k = config.k;
  o.mces_budget = similarity::Budget(config.mces_budget);
  o.fp_radius = config.fp_radius;
  o.fp_nbits = config.fp_nbits;
  return o;
}

void check(const RunConfig &config) {
  if (config.k < 1)
    throw std::invalid_argument("k must be >= 1");
  if (!(config.mces_budget >= 0))
    throw std::invalid_argument("MCES budget must be >= 0");
}

} // namespace

data::LoadReport cmd_ingest(const RunConfig &config, std::ostream &out) {
  const data::Dataset ds = load(config);
  out << ds.report.to_text();
  return ds.report;
}

std::vector<llm::CompletionOutcome> cmd_run(const RunConfig &config, std::ostream &out) {
  check(config);
  const data::Dataset ds = load(config);
  const protocol::PromptTemplate tmpl = load_template(config);
  std::vector<protocol::PromptInstance> prompts;
  prompts.reserve(ds.records.size());
  for (const data::SpectrumRecord &r: ds.records)
    prompts.push_back(tmpl.render(r));

  llm::Gateway gateway(config.provider, config.run_dir, llm::make_backend(config.provider_spec));
  gateway.set_progress_stream(&out);
  std::vector<llm::CompletionOutcome> outcomes = gateway.run_batch(prompts);

  std::map<llm::CompletionStatus, int> by_status;
  int cached = 0;
  for (const auto &o: outcomes) {
    ++by_status[o.status];
    cached += o.cached;
  }
  out << "records: " << outcomes.size() << '\n' << "cached: " << cached << '\n';
  for (const auto &[status, n]: by_status)
    out << to_string(status) << ": " << n << '\n';
  out << "transcripts: " << gateway.transcripts_dir().string() << '\n';
  return outcomes;
}

void score_all(std::span<const data::SpectrumRecord> records,
               std::span<const std::string> transcripts, const eval::ScoringOptions &options,
               int threads, std::vector<eval::PerSpectrumMetrics> &metrics,
               std::vector<eval::CotAudit> &audits) {
  if (records.size() != transcripts.size())
    throw std::invalid_argument("records and transcripts differ in length");
  metrics.assign(records.size(), {});
  audits.assign(records.size(), {});
  util::parallel_for(records.size(), threads <= 0 ? util::hardware_threads() : threads,
                     [&](std::size_t i) {
                       const protocol::ParsedResponse parsed =
                           protocol::parse_response(transcripts[i]);
                       metrics[i] = eval::score_spectrum(records[i], parsed, options);
                       audits[i] = eval::audit_cot(parsed, records[i]);
                     });
}

EvaluateResult cmd_evaluate(const RunConfig &config, std::ostream &out) {
  check(config);
  const data::Dataset ds = load(config);
  const std::filesystem::path transcripts_dir = config.run_dir / "transcripts";
  std::error_code ec;
  if (!std::filesystem::is_directory(transcripts_dir, ec))
    throw MissingTranscripts("MissingTranscripts: " + transcripts_dir.string()
                             + " does not exist (run the 'run' command first)");

  EvaluateResult result;
  std::vector<std::string> transcripts;
  transcripts.reserve(ds.records.size());
  for (const data::SpectrumRecord &r: ds.records) {
    std::ifstream in(transcripts_dir / (llm::safe_file_name(r.id) + ".txt"), std::ios::binary);
    if (!in) {
      ++result.missing_transcripts;
      transcripts.emplace_back();
      continue;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    transcripts.push_back(ss.str());
  }

  score_all(ds.records, transcripts, scoring_options(config), config.eval_threads,
            result.metrics, result.audits);
  result.report =
      eval::aggregate(result.metrics, result.audits, config.provider.model_name, config.k);

  result.reports_dir = config.run_dir / "reports";
  eval::write_per_spectrum_csv(result.reports_dir / "per_spectrum.csv", result.metrics);
  eval::write_audit_csv(result.reports_dir / "cot_audit.csv", result.audits);
  eval::write_aggregate_csv(result.reports_dir / "aggregate.csv", result.report);
  eval::write_aggregate_json(result.reports_dir / "aggregate.json", result.report);
  eval::write_bins_csv(result.reports_dir / "bins.csv", result.report);

  out << "evaluated: " << result.metrics.size() << '\n'
      << "missing_transcripts: " << result.missing_transcripts << '\n'
      << "mces_pairs: " << result.report.all.mces_pairs << '\n'
      << "mces_pairs_truncated: " << result.report.all.mces_pairs_truncated << '\n'
      << "reports: " << result.reports_dir.string() << '\n';
  return result;
}

EvaluateResult cmd_report(const RunConfig &config, std::ostream &out) {
  EvaluateResult result = cmd_evaluate(config, out);
  out << '\n' << eval::format_report(result.report);
  return result;
}

similarity::McesResult cmd_mces(const std::string &smiles_a, const std::string &smiles_b,
                                double budget_seconds, std::ostream &out) {
  const chem::Molecule a = chem::molecule_from_smiles(smiles_a);
  const chem::Molecule b = chem::molecule_from_smiles(smiles_b);
  const similarity::McesResult r = similarity::mces(a, b, similarity::Budget(budget_seconds));
  out << "common_edges: " << r.common_edges << '\n'
      << "dissimilarity: " << r.dissimilarity << '\n'
      << "optimal: " << (r.optimal ? "true" : "false") << '\n';
  return r;
}

} // namespace msbench::app
