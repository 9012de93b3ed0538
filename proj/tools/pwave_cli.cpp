#include <iostream>
#include <string>
#include <vector>

#include "pwave/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pwave::cli::run(args, std::cout, std::cerr);
}
