//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "msbench/app/commands.h"

int main(int argc, char **argv) {
  return msbench::app::run_cli(argc, argv, std::cout, std::cerr);
}
