#include <string>
#include <vector>

#include "slowrate/expcli/cli.hpp"

int main(int argc, char** argv) {
  return slowrate::expcli::cli_run(std::vector<std::string>(argv + 1, argv + argc));
}
