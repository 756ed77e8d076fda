#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace rsls {

// %.17g: 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

// Minimal CSV emitter. All numbers go through format_double so identical
// inputs produce identical bytes.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }

private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace rsls
