#include <iostream>
#include <vector>

#include "genbound/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return genbound::cli::run(args, std::cout, std::cerr);
}
