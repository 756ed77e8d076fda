#include "rsls/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace rsls {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), n_cols_(header.size()) {
  if (!out_) throw std::invalid_argument("CsvWriter: cannot open " + path);
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw std::logic_error("CsvWriter: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace rsls
