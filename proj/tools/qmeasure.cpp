#include <iostream>
#include <string>
#include <vector>

#include "qmeasure/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qmeasure::cli::run(args, std::cout, std::cerr);
}
