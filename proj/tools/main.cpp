#include <iostream>

#include "elmdecomp_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return elm::cli::run_cli(args, std::cout, std::cerr);
}
