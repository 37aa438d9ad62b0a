// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "nearfield/cli.hpp"

int main(int argc, char **argv)
{
  return nearfield::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
