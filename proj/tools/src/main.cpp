#include <iostream>
#include <string>
#include <vector>

#include "labmech_cli/cli.hpp"

int main(int argc, char** argv) {
  return labmech::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
