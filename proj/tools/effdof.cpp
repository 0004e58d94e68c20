#include <iostream>

#include "effdof/cli.hpp"

int main(int argc, char** argv) {
  return effdof::cli::run(argc, argv, std::cout, std::cerr);
}
