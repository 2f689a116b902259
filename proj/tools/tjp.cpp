#include <iostream>
#include <string>
#include <vector>

#include "tjp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tjp::dispatch(args, std::cout, std::cerr);
}
