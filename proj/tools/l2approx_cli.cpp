#include <iostream>

#include "l2approx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return l2approx::run_cli(args, std::cout, std::cerr);
}
