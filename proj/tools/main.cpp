#include <iostream>
#include <string>
#include <vector>

#include "fresco/tools/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fresco::tools::run_cli(args, std::cin, std::cout, std::cerr);
}
