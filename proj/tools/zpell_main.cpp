#include <iostream>
#include <string>
#include <vector>

#include "zpell/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return zpell::cli::run_cli(args, std::cout, std::cerr);
}
