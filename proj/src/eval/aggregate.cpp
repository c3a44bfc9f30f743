//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/eval/aggregate.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace msbench::eval {
namespace {

using Json = nlohmann::json;

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (const char c: s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string flag(bool b) {
  return b ? "1" : "0";
}

template <typename T>
std::string opt_flag(const std::optional<T> &v) {
  return v ? flag(*v) : "";
}

std::ofstream open_out(const std::filesystem::path &path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Headline values for one denominator, in headline_columns() order.
std::vector<double> headline(const MetricSums &s) {
  return {
    s.percent(s.think),          s.percent(s.answer),         s.percent(s.valid_top1),
    s.percent(s.dbe),            s.percent(s.formula),        s.percent(s.exact_top1),
    s.percent(s.exact_topk),     s.mean(s.mts_top1),          s.mean(s.mts_topk),
    s.mean(s.mces_top1),         s.mean(s.mces_topk),
  };
}

const std::vector<std::string> &headline_keys() {
  static const std::vector<std::string> keys = {
    "think_rate",    "answer_rate",   "smiles_validity", "dbe_accuracy",
    "formula_consistency", "accuracy_top1", "accuracy_topk", "tanimoto_top1",
    "tanimoto_topk", "mces_top1",     "mces_topk",
  };
  return keys;
}

double ratio(long num, long den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

void MetricSums::add(const PerSpectrumMetrics &m) {
  ++n;
  think += m.has_think;
  answer += m.has_answer;
  valid_top1 += m.validity_top1;
  formula += m.formula_consistent_any;
  dbe += m.dbe_correct_top1;
  exact_top1 += m.exact_top1;
  exact_topk += m.exact_topk;
  mts_top1 += m.mts_top1;
  mts_topk += m.mts_topk;
  mces_top1 += m.mces_top1;
  mces_topk += m.mces_topk;
  mces_pairs += m.mces_pairs;
  mces_pairs_truncated += m.mces_pairs_truncated;
  records_truncated += m.mces_truncated;
}

MetricSums &MetricSums::operator+=(const MetricSums &o) {
  n += o.n;
  think += o.think;
  answer += o.answer;
  valid_top1 += o.valid_top1;
  formula += o.formula;
  dbe += o.dbe;
  exact_top1 += o.exact_top1;
  exact_topk += o.exact_topk;
  mts_top1 += o.mts_top1;
  mts_topk += o.mts_topk;
  mces_top1 += o.mces_top1;
  mces_topk += o.mces_topk;
  mces_pairs += o.mces_pairs;
  mces_pairs_truncated += o.mces_pairs_truncated;
  records_truncated += o.records_truncated;
  return *this;
}

double MetricSums::percent(long count) const {
  return ratio(count, n);
}

double MetricSums::mean(double sum) const {
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

void CotSums::add(const CotAudit &a) {
  if (!a.has_think)
    return;
  ++records;
  words += a.word_count;
  dbe_claims += a.dbe_claim_correct.has_value();
  dbe_correct += a.dbe_claim_correct.value_or(false);
  formula_claims += a.formula_claim_correct.has_value();
  formula_correct += a.formula_claim_correct.value_or(false);
  contradictions += a.contradiction;
}

CotSums &CotSums::operator+=(const CotSums &o) {
  records += o.records;
  words += o.words;
  dbe_claims += o.dbe_claims;
  dbe_correct += o.dbe_correct;
  formula_claims += o.formula_claims;
  formula_correct += o.formula_correct;
  contradictions += o.contradictions;
  return *this;
}

AggregateReport::AggregateReport() {
  for (const data::WeightBin b: data::kAllWeightBins)
    bins[b];
}

void AggregateReport::add(const PerSpectrumMetrics &m, const CotAudit &a) {
  all.add(m);
  if (m.has_answer)
    answered.add(m);
  bins[m.bin].add(m);
  cot.add(a);
}

AggregateReport &AggregateReport::merge(const AggregateReport &o) {
  if (o.k != k || o.model != model)
    throw std::invalid_argument("cannot merge reports of different model or k");
  all += o.all;
  answered += o.answered;
  for (const auto &[bin, sums]: o.bins)
    bins[bin] += sums;
  cot += o.cot;
  return *this;
}

AggregateReport aggregate(std::span<const PerSpectrumMetrics> metrics,
                          std::span<const CotAudit> audits, const std::string &model, int k) {
  if (metrics.empty())
    throw EmptyInput("EmptyInput: no metrics to aggregate");
  if (metrics.size() != audits.size())
    throw std::invalid_argument("metrics and audits differ in length");
  AggregateReport r;
  r.model = model;
  r.k = k;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (metrics[i].record_id != audits[i].record_id)
      throw std::invalid_argument("metrics and audits are not aligned at " + metrics[i].record_id);
    r.add(metrics[i], audits[i]);
  }
  return r;
}

std::vector<std::string> headline_columns(int k) {
  const std::string kk = std::to_string(k);
  return {
    "Think Rate (%)",     "Answer Rate (%)",     "SMILES Validity (%)",
    "DBE Accuracy (%)",   "Formula Consistency (%)", "Accuracy Top-1 (%)",
    "Accuracy Top-" + kk + " (%)", "Tanimoto Top-1", "Tanimoto Top-" + kk,
    "MCES Top-1",         "MCES Top-" + kk,
  };
}

void write_per_spectrum_csv(const std::filesystem::path &path,
                            std::span<const PerSpectrumMetrics> metrics) {
  std::ofstream out = open_out(path);
  out << "record_id,k,bin,has_think,has_answer,n_candidates,n_valid,validity_top1,"
         "formula_consistent_any,dbe_correct_top1,exact_top1,exact_topk,mts_top1,mts_topk,"
         "mces_top1,mces_topk,mces_truncated,mces_pairs,mces_pairs_truncated\n";
  for (const PerSpectrumMetrics &m: metrics) {
    out << csv_field(m.record_id) << ',' << m.k << ',' << data::to_string(m.bin) << ','
        << flag(m.has_think) << ',' << flag(m.has_answer) << ',' << m.n_candidates << ','
        << m.n_valid << ',' << flag(m.validity_top1) << ',' << flag(m.formula_consistent_any)
        << ',' << flag(m.dbe_correct_top1) << ',' << flag(m.exact_top1) << ','
        << flag(m.exact_topk) << ',' << fixed(m.mts_top1) << ',' << fixed(m.mts_topk) << ','
        << fixed(m.mces_top1) << ',' << fixed(m.mces_topk) << ',' << flag(m.mces_truncated)
        << ',' << m.mces_pairs << ',' << m.mces_pairs_truncated << '\n';
  }
}

void write_audit_csv(const std::filesystem::path &path, std::span<const CotAudit> audits) {
  std::ofstream out = open_out(path);
  out << "record_id,has_think,word_count,stated_dbe,stated_formula,dbe_claim_correct,"
         "formula_claim_correct,contradiction\n";
  for (const CotAudit &a: audits) {
    out << csv_field(a.record_id) << ',' << flag(a.has_think) << ',' << a.word_count << ','
        << (a.stated_dbe ? a.stated_dbe->to_string() : "") << ','
        << (a.stated_formula ? chem::canonical_formula(*a.stated_formula) : "") << ','
        << opt_flag(a.dbe_claim_correct) << ',' << opt_flag(a.formula_claim_correct) << ','
        << flag(a.contradiction) << '\n';
  }
}

void write_aggregate_csv(const std::filesystem::path &path, const AggregateReport &r) {
  std::ofstream out = open_out(path);
  out << "model,k,denominator,n";
  for (const std::string &key: headline_keys())
    out << ',' << key;
  out << ",mces_pairs,mces_pairs_truncated,mces_truncated_fraction,records_truncated"
         ",cot_records,cot_mean_words,cot_dbe_claims,cot_dbe_correct,cot_formula_claims"
         ",cot_formula_correct,cot_contradiction\n";
  const CotSums &c = r.cot;
  for (const auto &[name, sums]: { std::pair<const char *, const MetricSums *> { "all", &r.all },
                                   { "answered", &r.answered } }) {
    out << csv_field(r.model) << ',' << r.k << ',' << name << ',' << sums->n;
    for (const double v: headline(*sums))
      out << ',' << fixed(v);
    const double trunc_frac =
        sums->mces_pairs == 0 ? 0.0
                              : static_cast<double>(sums->mces_pairs_truncated) / sums->mces_pairs;
    out << ',' << sums->mces_pairs << ',' << sums->mces_pairs_truncated << ','
        << fixed(trunc_frac) << ',' << sums->records_truncated << ',' << c.records << ','
        << fixed(c.records == 0 ? 0.0 : static_cast<double>(c.words) / c.records) << ','
        << c.dbe_claims << ',' << fixed(ratio(c.dbe_correct, c.dbe_claims)) << ','
        << c.formula_claims << ',' << fixed(ratio(c.formula_correct, c.formula_claims)) << ','
        << fixed(ratio(c.contradictions, c.records)) << '\n';
  }
}

void write_aggregate_json(const std::filesystem::path &path, const AggregateReport &r) {
  auto block = [](const MetricSums &s) {
    Json j = { { "n", s.n } };
    const auto values = headline(s);
    for (std::size_t i = 0; i < values.size(); ++i)
      j[headline_keys()[i]] = values[i];
    j["mces_pairs"] = s.mces_pairs;
    j["mces_pairs_truncated"] = s.mces_pairs_truncated;
    j["records_truncated"] = s.records_truncated;
    return j;
  };
  Json bins = Json::array();
  for (const auto &[bin, sums]: r.bins) {
    Json b = block(sums);
    b["bin"] = std::string(data::to_string(bin));
    bins.push_back(b);
  }
  const CotSums &c = r.cot;
  const Json j = {
    { "model", r.model },
    { "k", r.k },
    { "all", block(r.all) },
    { "answered", block(r.answered) },
    { "bins", bins },
    { "cot",
      { { "records", c.records },
        { "mean_words", c.records == 0 ? 0.0 : static_cast<double>(c.words) / c.records },
        { "dbe_claims", c.dbe_claims },
        { "dbe_correct_percent", ratio(c.dbe_correct, c.dbe_claims) },
        { "formula_claims", c.formula_claims },
        { "formula_correct_percent", ratio(c.formula_correct, c.formula_claims) },
        { "contradiction_percent", ratio(c.contradictions, c.records) } } },
  };
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_bins_csv(const std::filesystem::path &path, const AggregateReport &r) {
  std::ofstream out = open_out(path);
  out << "model,k,bin,n,accuracy_top1,accuracy_topk,tanimoto_top1,tanimoto_topk,mces_top1,"
         "mces_topk,mces_pairs,mces_pairs_truncated\n";
  for (const auto &[bin, s]: r.bins) {
    out << csv_field(r.model) << ',' << r.k << ',' << data::to_string(bin) << ',' << s.n << ','
        << fixed(s.percent(s.exact_top1)) << ',' << fixed(s.percent(s.exact_topk)) << ','
        << fixed(s.mean(s.mts_top1)) << ',' << fixed(s.mean(s.mts_topk)) << ','
        << fixed(s.mean(s.mces_top1)) << ',' << fixed(s.mean(s.mces_topk)) << ','
        << s.mces_pairs << ',' << s.mces_pairs_truncated << '\n';
  }
}

std::string format_report(const AggregateReport &r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %12s %12s\n", ("model: " + r.model).c_str(), "all",
                "answered");
  out << line;
  std::snprintf(line, sizeof line, "%-28s %12ld %12ld\n", "Records", r.all.n, r.answered.n);
  out << line;
  const auto labels = headline_columns(r.k);
  const auto a = headline(r.all);
  const auto b = headline(r.answered);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::snprintf(line, sizeof line, "%-28s %12.2f %12.2f\n", labels[i].c_str(), a[i], b[i]);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-28s %12ld of %ld\n", "MCES pairs truncated",
                r.all.mces_pairs_truncated, r.all.mces_pairs);
  out << line;
  out << "\nBy molecular weight (Da):\n";
  std::snprintf(line, sizeof line, "%-12s %8s %10s %10s %10s %10s\n", "bin", "n", "Tan@1",
                ("Tan@" + std::to_string(r.k)).c_str(), "MCES@1",
                ("MCES@" + std::to_string(r.k)).c_str());
  out << line;
  for (const auto &[bin, s]: r.bins) {
    std::snprintf(line, sizeof line, "%-12s %8ld %10.3f %10.3f %10.3f %10.3f\n",
                  std::string(data::to_string(bin)).c_str(), s.n, s.mean(s.mts_top1),
                  s.mean(s.mts_topk), s.mean(s.mces_top1), s.mean(s.mces_topk));
    out << line;
  }
  const CotSums &c = r.cot;
  out << "\nReasoning audit (" << c.records << " records with a think block):\n";
  std::snprintf(line, sizeof line,
                "  mean words %.1f, DBE correct %.2f%% of %ld, formula correct %.2f%% of %ld, "
                "contradiction %.2f%%\n",
                c.records == 0 ? 0.0 : static_cast<double>(c.words) / c.records,
                ratio(c.dbe_correct, c.dbe_claims), c.dbe_claims,
                ratio(c.formula_correct, c.formula_claims), c.formula_claims,
                ratio(c.contradictions, c.records));
  out << line;
  return out.str();
}

} // namespace msbench::eval
