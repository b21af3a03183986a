#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace veselova::cli {

// Comma-separated rows with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  bool enabled() const { return out_.is_open(); }
  void row(const std::vector<double>& values);
  void row(const std::vector<double>& values, const std::string& tail);
  void close();

 private:
  std::ofstream out_;
};

std::string format_double(double v);

// "out.csv", 3 -> "out_3.csv".
std::string indexed_path(const std::string& path, int index);

}  // namespace veselova::cli
