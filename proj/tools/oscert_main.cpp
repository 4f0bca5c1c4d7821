#include <iostream>
#include <string>
#include <vector>

#include "oscert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return oscert::run_cli(args, std::cout, std::cerr);
}
