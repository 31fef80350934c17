#include <iostream>
#include <string>
#include <vector>

#include "nw/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const nw::cli::Outcome res = nw::cli::run(args);
  std::cout << res.out;
  std::cerr << res.err;
  return res.exit_code;
}
