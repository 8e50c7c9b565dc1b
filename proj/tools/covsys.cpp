#include <iostream>
#include <string>
#include <vector>

#include "covsys/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return covsys::cli::run(args, std::cout, std::cerr, std::cin);
}
