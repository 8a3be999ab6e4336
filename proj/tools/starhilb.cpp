#include "starhilb/harness.hpp"

#include <string>
#include <vector>

int main(int argc, char** argv) {
  return starhilb::harness::main_entry(std::vector<std::string>(argv, argv + argc));
}
