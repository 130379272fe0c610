#include <iostream>
#include <string>
#include <vector>

#include "opensys/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return opensys::run_cli(args, std::cout, std::cerr);
}
