// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "carbonledger/cli.hpp"

int main(int argc, char** argv)
{
    return carbonledger::cli::run(argc, argv, std::cout, std::cerr);
}
