#include <iostream>
#include <string>
#include <vector>

#include "siegelfc_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return siegelfc::cli::run(args, std::cout, std::cerr);
}
