#include <string>
#include <vector>

#include "edenca/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return edenca::run_cli(args);
}
