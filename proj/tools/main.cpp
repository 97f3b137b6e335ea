#include <iostream>
#include <string>
#include <vector>

#include "reconeval/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return reconeval::cli::run(args, std::cout, std::cerr);
}
