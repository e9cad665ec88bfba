#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace test_helpers {

inline std::filesystem::path tmp_dir() {
  auto dir = std::filesystem::current_path() / "test_tmp";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::string& name, const std::string& content) {
  auto path = tmp_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace test_helpers
