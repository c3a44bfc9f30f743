//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_UTIL_DIGEST_H_
#define MSBENCH_UTIL_DIGEST_H_

#include <string>
#include <string_view>

namespace msbench::util {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

} // namespace msbench::util

#endif // MSBENCH_UTIL_DIGEST_H_
