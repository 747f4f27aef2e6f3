#include "raloops/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return raloops::cli_main(argc, argv, std::cout, std::cerr);
}
