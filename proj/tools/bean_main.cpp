#include <iostream>

#include "bean/cli.hpp"
#include "bean/stack.hpp"

int main(int argc, char** argv) {
  // Large generated programs nest deeply; every pass is recursive.
  return bean::run_with_large_stack([&] { return bean::run_cli(argc, argv, std::cout, std::cerr); });
}
