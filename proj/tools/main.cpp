#include <iostream>
#include <string>
#include <vector>

#include "curveprox/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curveprox::cli::run(args, std::cout, std::cerr);
}
