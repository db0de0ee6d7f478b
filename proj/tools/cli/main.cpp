#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return agentrag::cli::run(args, std::cin, std::cout, std::cerr);
}
