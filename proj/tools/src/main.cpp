#include <iostream>
#include <string>
#include <vector>

#include "rboost_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rboost::cli::run(args, std::cout, std::cerr);
}
