#include <iostream>
#include <string>
#include <vector>

#include "qwh_cli/app.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return qwh::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
