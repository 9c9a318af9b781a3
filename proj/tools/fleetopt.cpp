#include <iostream>

#include "fleetopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fleetopt::cli::run(args, std::cout, std::cerr);
}
