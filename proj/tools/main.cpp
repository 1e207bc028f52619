#include <iostream>

#include "pwalloc/cli.hpp"

int main(int argc, char** argv) {
  return pwalloc::cli::run(argc, argv, std::cout, std::cerr);
}
