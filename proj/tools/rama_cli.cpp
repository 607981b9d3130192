#include <iostream>
#include <string>
#include <vector>

#include "rama/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rama::cli_main(args, std::cout, std::cerr);
}
