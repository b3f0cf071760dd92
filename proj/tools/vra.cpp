#include <iostream>

#include "vra/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return vra::run_command(args, std::cout, std::cerr);
}
