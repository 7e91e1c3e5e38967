#include <charconv>
#include <cmath>
#include <fstream>

#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"

namespace dqed::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns,
                     std::vector<bool> complex_column)
    : path_(path), complex_(std::move(complex_column)) {
  if (columns.size() != complex_.size()) throw DimensionError("CsvWriter: one complex flag per column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += complex_[i] ? columns[i] + "_re," + columns[i] + "_im" : columns[i];
  }
  buffer_ += '\n';
  std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path_.string());
  out << buffer_;
  buffer_.clear();
}

void CsvWriter::row(const std::vector<cd>& values) {
  if (values.size() != complex_.size()) throw DimensionError("CsvWriter::row: wrong number of values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i].real());
    if (complex_[i]) buffer_ += ',' + format_double(values[i].imag());
  }
  buffer_ += '\n';
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot write " + path_.string());
  out << buffer_;
  buffer_.clear();
}

}  // namespace dqed::cli
