#include <iostream>
#include <string>
#include <vector>

#include "qtori/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qtori::cli::run(args, std::cout, std::cerr);
}
