#include <iostream>

#include "semifix/cli.hpp"

int main(int argc, char** argv) {
  return semifix::cli::run(argc, argv, std::cout, std::cerr);
}
