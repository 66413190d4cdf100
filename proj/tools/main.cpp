#include <iostream>
#include <string>
#include <vector>

#include "zerocross/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zerocross::cli::run_command(args, std::cout, std::cerr);
}
