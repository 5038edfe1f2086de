#include <iostream>
#include <string>
#include <vector>

#include "logobs_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return logobs::cli::run(args, std::cout);
}
