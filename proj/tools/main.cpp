#include <iostream>

#include "maxent/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return maxent::run_cli(args, std::cout, std::cerr);
}
