#include <iostream>

#include "bmw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bmw::cli::dispatch(args, std::cout, std::cerr);
}
