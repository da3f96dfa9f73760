// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "gossip_loc/cli.hpp"

int main(int argc, char** argv) { return gossip_loc::cli_main(argc, argv, std::cout, std::cerr); }
