#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ambivox/error.hpp"

namespace ambivox::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(AMBIVOX_TEST_DATA_DIR) / name;
}

inline nlohmann::json load_json_fixture(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw IoError("missing fixture " + name);
  return nlohmann::json::parse(in);
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace ambivox::testing
