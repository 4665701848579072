#pragma once

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace vwl::csv {

/// Shortest round-trip representation; locale independent.
inline std::string num(double v) { return fmt::format("{}", v); }

/// Comma separated, header row, LF line endings.
class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace vwl::csv
