#include <iostream>
#include <string>
#include <vector>

#include "learnspace/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return learnspace::run_cli(args, std::cout, std::cerr);
}
