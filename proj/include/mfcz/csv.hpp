#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfcz {

/// CSV table with a fixed header, full-precision scientific numbers, and
/// deterministic row order (insertion order; callers sort before adding).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
  void write(const std::string& path) const;

  static std::string num(double v);
  static std::string num(std::int64_t v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace mfcz
