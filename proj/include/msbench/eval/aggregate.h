//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_EVAL_AGGREGATE_H_
#define MSBENCH_EVAL_AGGREGATE_H_

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msbench/eval/scoring.h"

namespace msbench::eval {

class EmptyInput: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Counts and sums over a set of spectra. Means and rates are derived at
/// output time, so merging two sums is exact for the counts.
struct MetricSums {
  long n = 0;
  long think = 0;
  long answer = 0;
  long valid_top1 = 0;
  long formula = 0;
  long dbe = 0;
  long exact_top1 = 0;
  long exact_topk = 0;
  double mts_top1 = 0;
  double mts_topk = 0;
  double mces_top1 = 0;
  double mces_topk = 0;
  long mces_pairs = 0;
  long mces_pairs_truncated = 0;
  long records_truncated = 0;

  void add(const PerSpectrumMetrics &m);
  MetricSums &operator+=(const MetricSums &o);

  /// 100 * count / n, or 0 when n = 0.
  double percent(long count) const;
  /// sum / n, or 0 when n = 0.
  double mean(double sum) const;
};

struct CotSums {
  long records = 0;  // with a reasoning block
  long words = 0;
  long dbe_claims = 0;
  long dbe_correct = 0;
  long formula_claims = 0;
  long formula_correct = 0;
  long contradictions = 0;

  void add(const CotAudit &a);
  CotSums &operator+=(const CotSums &o);
};

struct AggregateReport {
  std::string model;
  int k = 10;
  MetricSums all;
  MetricSums answered;  // restricted to records with an answer block
  std::map<data::WeightBin, MetricSums> bins;  // every bin present
  CotSums cot;

  AggregateReport();
  void add(const PerSpectrumMetrics &m, const CotAudit &a);
  /// Combines two reports of the same model and k; throws
  /// std::invalid_argument otherwise.
  AggregateReport &merge(const AggregateReport &o);
};

/// Throws EmptyInput on empty input and std::invalid_argument when the two
/// lists are not aligned by record id.
AggregateReport aggregate(std::span<const PerSpectrumMetrics> metrics,
                          std::span<const CotAudit> audits, const std::string &model, int k);

/// Labels of the headline table rows, in order, for a given k.
std::vector<std::string> headline_columns(int k);

void write_per_spectrum_csv(const std::filesystem::path &path,
                            std::span<const PerSpectrumMetrics> metrics);
void write_audit_csv(const std::filesystem::path &path, std::span<const CotAudit> audits);
/// One row per denominator ("all", "answered").
void write_aggregate_csv(const std::filesystem::path &path, const AggregateReport &report);
void write_aggregate_json(const std::filesystem::path &path, const AggregateReport &report);
/// One row per weight bin.
void write_bins_csv(const std::filesystem::path &path, const AggregateReport &report);
/// Human-readable summary table.
std::string format_report(const AggregateReport &report);

} // namespace msbench::eval

#endif // MSBENCH_EVAL_AGGREGATE_H_
