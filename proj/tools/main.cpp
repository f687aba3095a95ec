#include <string>
#include <vector>

#include "latentscope/cli.hpp"

int main(int argc, char** argv) {
  return latentscope::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
