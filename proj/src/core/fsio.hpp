#pragma once
// Whole-file reads and writes for the binary store files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "core/types.hpp"

namespace tsg {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw TsgError("cannot open " + file.string());
  std::vector<std::uint8_t> buf(std::filesystem::file_size(file));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw TsgError("short read on " + file.string());
  return buf;
}

inline void write_file(const std::filesystem::path& file, const std::vector<std::uint8_t>& data) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw TsgError("cannot create " + file.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw TsgError("short write on " + file.string());
}

inline void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw TsgError("cannot create " + file.string());
  out << text;
  out.flush();
  if (!out) throw TsgError("short write on " + file.string());
}

inline std::string read_text_file(const std::filesystem::path& file) {
  auto buf = read_file(file);
  return std::string(buf.begin(), buf.end());
}

}  // namespace tsg
