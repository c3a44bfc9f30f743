//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "msbench/protocol/response.h"
#include "support/corpus.h"
#include "support/temp_dir.h"

namespace msbench::protocol {
namespace {

using Strings = std::vector<std::string>;

TEST(ParseResponse, ExampleTranscript) {
  const std::string raw = test::read_file(test::data_path("fixture/transcripts/tert_butylamine.txt"));
  const ParsedResponse p = parse_response(raw);
  EXPECT_TRUE(p.has_think);
  EXPECT_TRUE(p.has_answer);
  ASSERT_EQ(p.candidates.size(), 10u);
  EXPECT_EQ(p.candidates.front(), "CC(C)(C)N");
  EXPECT_EQ(p.candidates.back(), "CCCN(C)C");
  EXPECT_EQ(p.candidates[3], "CCN(CC)C");
  ASSERT_TRUE(p.think_text.has_value());
  EXPECT_EQ(p.cot_word_count, word_count(*p.think_text));
  EXPECT_NE(p.think_text->find("Formula: C4H11N"), std::string::npos);
  EXPECT_EQ(p.raw, raw);
}

TEST(ParseResponse, EmptyAndTagless) {
  for (const std::string raw: { "", "no tags here", "</think><think>", "<answer>" }) {
    const ParsedResponse p = parse_response(raw);
    EXPECT_FALSE(p.has_think) << raw;
    EXPECT_FALSE(p.has_answer) << raw;
    EXPECT_TRUE(p.candidates.empty());
    EXPECT_EQ(p.cot_word_count, 0);
  }
}

TEST(ParseResponse, UnterminatedThink) {
  const ParsedResponse p = parse_response("<think>still going... <answer>CCO</answer>");
  EXPECT_FALSE(p.has_think);
  EXPECT_FALSE(p.think_text.has_value());
  EXPECT_TRUE(p.has_answer);
  EXPECT_EQ(p.candidates, Strings { "CCO" });
}

TEST(ParseResponse, CaseInsensitiveTags) {
  const ParsedResponse p = parse_response("<THINK>a b c</Think>\n<Answer>SMILES: CCO, CCN</ANSWER>");
  EXPECT_TRUE(p.has_think);
  EXPECT_EQ(p.cot_word_count, 3);
  EXPECT_EQ(p.candidates, (Strings { "CCO", "CCN" }));
}

TEST(ParseResponse, EmptyAnswerBlock) {
  const ParsedResponse p = parse_response("<think>x</think><answer>  \n </answer>");
  EXPECT_TRUE(p.has_think);
  EXPECT_FALSE(p.has_answer);
}

TEST(ParseResponse, NumberedAndBulletedLists) {
  const ParsedResponse p = parse_response(
      "<answer>\nHere are my proposals.\nSMILES candidates:\n1. CCO (ethanol)\n2) `CCN`\n"
      "- \"CCC\";\n* C1CC1.\n</answer>");
  EXPECT_EQ(p.candidates, (Strings { "CCO", "CCN", "CCC", "C1CC1" }));
}

TEST(ParseResponse, UsesLastSmilesLabel) {
  const ParsedResponse p = parse_response(
      "<answer>Draft SMILES: C, CC\nFinal SMILES: CCO, CCN\n</answer>");
  EXPECT_EQ(p.candidates, (Strings { "CCO", "CCN" }));
}

TEST(ParseResponse, NoLabelUsesWholeBlock) {
  const ParsedResponse p = parse_response("<answer>CCO,CCN\nCCC</answer>");
  EXPECT_EQ(p.candidates, (Strings { "CCO", "CCN", "CCC" }));
}

TEST(ParseResponse, NearestOpeningTag) {
  const ParsedResponse p = parse_response("<answer>old <answer>CCO</answer> trailing </answer>");
  EXPECT_EQ(p.candidates, Strings { "CCO" });
}

TEST(ParseResponse, CapsCandidates) {
  std::string body;
  for (int i = 0; i < 50; ++i)
    body += std::string(i % 5 + 1, 'C') + ",";
  const ParsedResponse p = parse_response("<answer>" + body + "</answer>");
  EXPECT_EQ(p.candidates.size(), kMaxCandidates);
}

TEST(Truncate, Examples) {
  const ParsedResponse p = parse_response("<answer>A, B, C</answer>");
  EXPECT_EQ(truncate_candidates(p, 1), Strings { "A" });
  EXPECT_EQ(truncate_candidates(p, 10), (Strings { "A", "B", "C" }));
  EXPECT_THROW(truncate_candidates(p, 0), std::invalid_argument);
  EXPECT_TRUE(truncate_candidates(parse_response(""), 5).empty());
}

TEST(WordCount, Examples) {
  EXPECT_EQ(word_count(""), 0);
  EXPECT_EQ(word_count("   \n\t "), 0);
  EXPECT_EQ(word_count("one"), 1);
  EXPECT_EQ(word_count(" a  b\tc\nd "), 4);
}

// Random byte soup built from tag fragments: parsing never throws and the
// flags agree with the extracted content.
TEST(ParseResponse, TotalOverRandomInput) {
  const std::vector<std::string> parts = {
    "<think>", "</think>", "<answer>", "</answer>", "<THINK>", "</Answer>", "SMILES:",
    "smiles", ":", ",", "\n", " ", "CCO", "1.", "- ", "\"", "x", "\t", "<", ">", "/",
    "\xff", std::string(1, '\0'),
  };
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  for (int t = 0; t < 20000; ++t) {
    std::string raw;
    for (int n = len(rng); n > 0; --n)
      raw += parts[pick(rng)];
    ParsedResponse p;
    ASSERT_NO_THROW(p = parse_response(raw)) << raw;
    EXPECT_EQ(p.has_answer, !p.candidates.empty());
    EXPECT_LE(p.candidates.size(), kMaxCandidates);
    EXPECT_EQ(p.has_think, p.think_text.has_value());
    EXPECT_EQ(p.cot_word_count, p.think_text ? word_count(*p.think_text) : 0);
    for (const auto &c: p.candidates) {
      EXPECT_FALSE(c.empty());
      EXPECT_EQ(c.find_first_of(" \t\n,"), std::string::npos);
    }
  }
}

} // namespace
} // namespace msbench::protocol
