#include <iostream>
#include <string>
#include <vector>

#include "crowdspan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return crowdspan::run_cli(args, std::cout, std::cerr);
}
