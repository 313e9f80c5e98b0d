#include <iostream>
#include <string>
#include <vector>

#include "biorv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return biorv::cli::dispatch(args, std::cout, std::cerr);
}
