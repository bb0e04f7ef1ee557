#include <iostream>

#include "infmat/cli.hpp"

int main(int argc, char** argv) {
  return infmat::cli::main(argc, argv, std::cout, std::cerr);
}
