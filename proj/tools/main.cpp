#include <iostream>
#include <string>
#include <vector>

#include "trisecant/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv + 1, argv + argc);
  return trisecant::run_cli(std::move(args), std::cout, std::cerr, std::cin);
}
