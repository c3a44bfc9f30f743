//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "msbench/eval/aggregate.h"
#include "support/temp_dir.h"

namespace msbench::eval {
namespace {

PerSpectrumMetrics metric(const std::string &id) {
  PerSpectrumMetrics m;
  m.record_id = id;
  return m;
}

CotAudit audit(const std::string &id) {
  CotAudit a;
  a.record_id = id;
  return a;
}

TEST(Aggregate, EmptyAndMisaligned) {
  EXPECT_THROW(aggregate({}, {}, "m", 10), EmptyInput);
  const std::vector<PerSpectrumMetrics> ms = { metric("a") };
  const std::vector<CotAudit> as = { audit("b") };
  EXPECT_THROW(aggregate(ms, as, "m", 10), std::invalid_argument);
  EXPECT_THROW(aggregate(ms, {}, "m", 10), std::invalid_argument);
}

TEST(Aggregate, SingleExactMatch) {
  PerSpectrumMetrics m = metric("a");
  m.has_answer = true;
  m.exact_topk = true;
  m.mts_topk = 1.0;
  m.mces_topk = 0.0;
  const AggregateReport r = aggregate(std::vector { m }, std::vector { audit("a") }, "m", 10);
  EXPECT_EQ(r.all.n, 1);
  EXPECT_DOUBLE_EQ(r.all.percent(r.all.exact_topk), 100.0);
  EXPECT_DOUBLE_EQ(r.all.percent(r.all.exact_top1), 0.0);
  EXPECT_DOUBLE_EQ(r.all.mean(r.all.mts_topk), 1.0);
}

TEST(Aggregate, ThinkRateOverTwo) {
  std::vector<PerSpectrumMetrics> ms = { metric("a"), metric("b") };
  std::vector<CotAudit> as = { audit("a"), audit("b") };
  ms[0].has_think = true;
  as[0].has_think = true;
  as[0].word_count = 40;
  const AggregateReport r = aggregate(ms, as, "m", 10);
  EXPECT_DOUBLE_EQ(r.all.percent(r.all.think), 50.0);
  EXPECT_EQ(r.cot.records, 1);
  EXPECT_EQ(r.cot.words, 40);
  EXPECT_EQ(r.answered.n, 0);
  EXPECT_DOUBLE_EQ(r.answered.percent(r.answered.think), 0.0);
}

TEST(Aggregate, HeadlineColumns) {
  const std::vector<std::string> expected = {
    "Think Rate (%)",   "Answer Rate (%)",   "SMILES Validity (%)", "DBE Accuracy (%)",
    "Formula Consistency (%)", "Accuracy Top-1 (%)", "Accuracy Top-10 (%)", "Tanimoto Top-1",
    "Tanimoto Top-10",  "MCES Top-1",        "MCES Top-10",
  };
  EXPECT_EQ(headline_columns(10), expected);
  EXPECT_EQ(headline_columns(5)[6], "Accuracy Top-5 (%)");
}

std::pair<std::vector<PerSpectrumMetrics>, std::vector<CotAudit>> random_inputs(std::mt19937 &rng,
                                                                                int n, int offset) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unit(0, 1);
  std::uniform_int_distribution<int> bin(0, 4);
  std::uniform_int_distribution<int> words(0, 600);
  std::vector<PerSpectrumMetrics> ms;
  std::vector<CotAudit> as;
  for (int i = 0; i < n; ++i) {
    const std::string id = "r" + std::to_string(offset + i);
    PerSpectrumMetrics m = metric(id);
    m.has_think = coin(rng);
    m.has_answer = coin(rng);
    m.validity_top1 = m.has_answer && coin(rng);
    m.formula_consistent_any = coin(rng);
    m.dbe_correct_top1 = coin(rng);
    m.exact_top1 = coin(rng) && coin(rng);
    m.exact_topk = m.exact_top1 || coin(rng);
    m.mts_top1 = unit(rng);
    m.mts_topk = std::max(m.mts_top1, unit(rng));
    m.mces_top1 = unit(rng);
    m.mces_topk = std::min(m.mces_top1, unit(rng));
    m.mces_pairs = bin(rng);
    m.mces_pairs_truncated = m.mces_pairs > 3 ? 1 : 0;
    m.mces_truncated = m.mces_pairs_truncated > 0;
    m.bin = static_cast<data::WeightBin>(bin(rng));
    CotAudit a = audit(id);
    a.has_think = m.has_think;
    a.word_count = a.has_think ? words(rng) : 0;
    if (a.has_think && coin(rng))
      a.dbe_claim_correct = coin(rng);
    if (a.has_think && coin(rng))
      a.formula_claim_correct = coin(rng);
    a.contradiction = a.has_think && coin(rng);
    ms.push_back(m);
    as.push_back(a);
  }
  return { ms, as };
}

void expect_sums_equal(const MetricSums &x, const MetricSums &y) {
  EXPECT_EQ(x.n, y.n);
  EXPECT_EQ(x.think, y.think);
  EXPECT_EQ(x.answer, y.answer);
  EXPECT_EQ(x.valid_top1, y.valid_top1);
  EXPECT_EQ(x.formula, y.formula);
  EXPECT_EQ(x.dbe, y.dbe);
  EXPECT_EQ(x.exact_top1, y.exact_top1);
  EXPECT_EQ(x.exact_topk, y.exact_topk);
  EXPECT_NEAR(x.mean(x.mts_top1), y.mean(y.mts_top1), 1e-12);
  EXPECT_NEAR(x.mean(x.mts_topk), y.mean(y.mts_topk), 1e-12);
  EXPECT_NEAR(x.mean(x.mces_top1), y.mean(y.mces_top1), 1e-12);
  EXPECT_NEAR(x.mean(x.mces_topk), y.mean(y.mces_topk), 1e-12);
  EXPECT_EQ(x.mces_pairs, y.mces_pairs);
  EXPECT_EQ(x.mces_pairs_truncated, y.mces_pairs_truncated);
  EXPECT_EQ(x.records_truncated, y.records_truncated);
}

// Aggregating a concatenation equals merging the two aggregates.
TEST(Aggregate, LinearUnderConcatenation) {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> size(1, 60);
  for (int trial = 0; trial < 200; ++trial) {
    auto [ma, aa] = random_inputs(rng, size(rng), 0);
    auto [mb, ab] = random_inputs(rng, size(rng), 1000);
    AggregateReport merged = aggregate(ma, aa, "m", 10);
    merged.merge(aggregate(mb, ab, "m", 10));
    ma.insert(ma.end(), mb.begin(), mb.end());
    aa.insert(aa.end(), ab.begin(), ab.end());
    const AggregateReport whole = aggregate(ma, aa, "m", 10);
    expect_sums_equal(merged.all, whole.all);
    expect_sums_equal(merged.answered, whole.answered);
    for (const auto bin: data::kAllWeightBins)
      expect_sums_equal(merged.bins.at(bin), whole.bins.at(bin));
    EXPECT_EQ(merged.cot.records, whole.cot.records);
    EXPECT_EQ(merged.cot.words, whole.cot.words);
    EXPECT_EQ(merged.cot.dbe_claims, whole.cot.dbe_claims);
    EXPECT_EQ(merged.cot.dbe_correct, whole.cot.dbe_correct);
    EXPECT_EQ(merged.cot.formula_claims, whole.cot.formula_claims);
    EXPECT_EQ(merged.cot.formula_correct, whole.cot.formula_correct);
    EXPECT_EQ(merged.cot.contradictions, whole.cot.contradictions);
  }
}

TEST(Aggregate, MergeRejectsDifferentK) {
  std::mt19937 rng(1);
  auto [m, a] = random_inputs(rng, 3, 0);
  AggregateReport r = aggregate(m, a, "m", 10);
  EXPECT_THROW(r.merge(aggregate(m, a, "m", 5)), std::invalid_argument);
}

TEST(Aggregate, BinCountsSumToTotal) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    auto [m, a] = random_inputs(rng, 1 + trial, 0);
    const AggregateReport r = aggregate(m, a, "m", 10);
    long total = 0;
    long exact = 0;
    EXPECT_EQ(r.bins.size(), 5u);
    for (const auto &[bin, sums]: r.bins) {
      total += sums.n;
      exact += sums.exact_topk;
    }
    EXPECT_EQ(total, r.all.n);
    EXPECT_EQ(exact, r.all.exact_topk);
    EXPECT_LE(r.answered.n, r.all.n);
    for (const auto &sums: { r.all, r.answered }) {
      for (const long c: { sums.think, sums.answer, sums.valid_top1, sums.formula, sums.dbe,
                           sums.exact_top1, sums.exact_topk }) {
        EXPECT_GE(sums.percent(c), 0.0);
        EXPECT_LE(sums.percent(c), 100.0);
      }
    }
  }
}

TEST(Writers, FilesHaveExpectedShape) {
  std::mt19937 rng(47);
  auto [m, a] = random_inputs(rng, 7, 0);
  const AggregateReport r = aggregate(m, a, "model-x", 10);
  test::TempDir dir;
  write_per_spectrum_csv(dir / "per.csv", m);
  write_audit_csv(dir / "audit.csv", a);
  write_aggregate_csv(dir / "agg.csv", r);
  write_aggregate_json(dir / "agg.json", r);
  write_bins_csv(dir / "bins.csv", r);

  auto lines = [](const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
      out.push_back(line);
    return out;
  };
  EXPECT_EQ(lines(test::read_file(dir / "per.csv")).size(), 8u);
  EXPECT_EQ(lines(test::read_file(dir / "audit.csv")).size(), 8u);
  const auto agg = lines(test::read_file(dir / "agg.csv"));
  ASSERT_EQ(agg.size(), 3u);
  EXPECT_EQ(agg[1].rfind("model-x,10,all,7,", 0), 0u);
  EXPECT_EQ(agg[2].rfind("model-x,10,answered,", 0), 0u);
  EXPECT_EQ(lines(test::read_file(dir / "bins.csv")).size(), 6u);

  const auto j = nlohmann::json::parse(test::read_file(dir / "agg.json"));
  EXPECT_EQ(j["model"], "model-x");
  EXPECT_EQ(j["k"], 10);
  EXPECT_EQ(j["all"]["n"], 7);
  EXPECT_TRUE(j.contains("answered"));

  const std::string text = format_report(r);
  for (const auto &label: headline_columns(10))
    EXPECT_NE(text.find(label), std::string::npos) << label;
}

} // namespace
} // namespace msbench::eval
