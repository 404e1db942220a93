#include "mfcz/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mfcz {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row width does not match header");
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i > 0) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("CsvTable: cannot open " + path);
  const std::string body = to_string();
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!file) throw std::runtime_error("CsvTable: write failed for " + path);
}

std::string CsvTable::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

std::string CsvTable::num(std::int64_t v) { return std::to_string(v); }

}  // namespace mfcz
