//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_EVAL_SCORING_H_
#define MSBENCH_EVAL_SCORING_H_

#include <optional>
#include <string>
#include <string_view>

#include "msbench/chem/formula.h"
#include "msbench/data/dataset.h"
#include "msbench/protocol/response.h"
#include "msbench/similarity/mces.h"

namespace msbench::eval {

struct ScoringOptions {
  int k = 10;
  similarity::Budget mces_budget = similarity::kDefaultMcesBudget;
  int fp_radius = 2;
  int fp_nbits = 2048;
};

struct PerSpectrumMetrics {
  std::string record_id;
  int k = 10;
  bool has_think = false;
  bool has_answer = false;
  int n_candidates = 0;
  int n_valid = 0;  // over all candidates
  bool validity_top1 = false;  // candidate #1 parses and perceives
  /// Formula of the first valid candidate equals the record's formula.
  bool formula_consistent_any = false;
  /// DBE of the first valid candidate equals the ground truth's DBE.
  bool dbe_correct_top1 = false;
  bool exact_top1 = false;
  bool exact_topk = false;  // ground truth among the first k candidates
  double mts_top1 = 0.0;  // Tanimoto of the first valid candidate
  double mts_topk = 0.0;  // max over the first k valid candidates
  double mces_top1 = 1.0;
  double mces_topk = 1.0;  // min over the first k valid candidates
  bool mces_truncated = false;
  int mces_pairs = 0;  // MCES searches actually run
  int mces_pairs_truncated = 0;
  data::WeightBin bin = data::WeightBin::k0To200;
};

/// Scores one spectrum. Invalid candidates are skipped in the top-k scans;
/// with no valid candidate the Tanimoto scores are 0 and MCES scores 1.
/// Throws chem::ChemError only if the record's ground truth is invalid.
PerSpectrumMetrics score_spectrum(const data::SpectrumRecord &record,
                                  const protocol::ParsedResponse &parsed,
                                  const ScoringOptions &options = {});

struct CotAudit {
  std::string record_id;
  bool has_think = false;
  std::optional<chem::Rational> stated_dbe;
  std::optional<chem::ElementCounts> stated_formula;
  std::optional<bool> dbe_claim_correct;  // vs the ground truth's DBE
  std::optional<bool> formula_claim_correct;  // vs the record's formula
  /// A stated claim disagrees with the first valid candidate.
  bool contradiction = false;
  int word_count = 0;
};

/// Checks the machine-readable claims in the reasoning block. Never throws
/// on any transcript.
CotAudit audit_cot(const protocol::ParsedResponse &parsed, const data::SpectrumRecord &record);

/// Final number of the last "=" segment on the first "Double Bond
/// Equivalents (DBE)" line; without "=", the first number after the label.
std::optional<chem::Rational> stated_dbe(std::string_view think_text);
/// The formula after "Formula:" on the first line containing it.
std::optional<chem::ElementCounts> stated_formula(std::string_view think_text);

} // namespace msbench::eval

#endif // MSBENCH_EVAL_SCORING_H_
