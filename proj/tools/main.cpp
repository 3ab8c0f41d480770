// SPDX-License-Identifier: Apache-2.0
#include "parabolica/cli.hpp"

int main(int argc, char** argv) { return parabolica::cli::run_cli(argc, argv); }
