#include <iostream>
#include <string>
#include <vector>

#include "agentarch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return agentarch::run_cli(args, std::cout, std::cerr);
}
