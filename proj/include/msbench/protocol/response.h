//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_PROTOCOL_RESPONSE_H_
#define MSBENCH_PROTOCOL_RESPONSE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace msbench::protocol {

inline constexpr std::size_t kMaxCandidates = 32;

struct ParsedResponse {
  std::string raw;
  std::optional<std::string> think_text;
  std::vector<std::string> candidates;
  bool has_think = false;
  bool has_answer = false;
  int cot_word_count = 0;
};

/// Splits a transcript into its reasoning block and candidate list. Tags
/// are case-insensitive; the first closing tag pairs with the nearest
/// opening tag before it. Candidates come from the last "SMILES ...:" line
/// of the answer block (and any lines after it), else from the whole block.
/// Never throws.
ParsedResponse parse_response(std::string_view raw);

/// The first min(k, size) candidates. Throws std::invalid_argument if k < 1.
std::vector<std::string> truncate_candidates(const ParsedResponse &parsed, int k);

/// Number of whitespace-separated tokens.
int word_count(std::string_view text);

} // namespace msbench::protocol

#endif // MSBENCH_PROTOCOL_RESPONSE_H_
