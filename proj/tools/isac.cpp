// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/harness/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return isac::harness::cli_main(argc, argv, std::cout, std::cerr);
}
