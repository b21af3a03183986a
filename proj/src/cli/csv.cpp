#include "veselova/cli/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace veselova::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values, const std::string& tail) {
  for (std::size_t i = 0; i < values.size(); ++i) out_ << format_double(values[i]) << ',';
  out_ << tail << '\n';
}

void CsvWriter::close() {
  if (out_.is_open()) out_.close();
}

std::string indexed_path(const std::string& path, int index) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "_" + std::to_string(index);
  return path.substr(0, dot) + "_" + std::to_string(index) + path.substr(dot);
}

}  // namespace veselova::cli
