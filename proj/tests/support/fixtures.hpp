#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace postedit::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string read_fixture(const std::string& name) {
  return read_file(std::string(POSTEDIT_FIXTURE_DIR) + "/" + name);
}

}  // namespace postedit::testing
