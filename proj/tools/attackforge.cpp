#include <iostream>

#include "attackforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return attackforge::cli::run(args, std::cout, std::cerr,
                               attackforge::cli::color_enabled());
}
