#include "coupledrd/csv.hpp"

#include <cstdio>
#include <ctime>

namespace crd {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), n_cols_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != n_cols_) throw std::logic_error("csv row width does not match header");
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out_ << (i ? "," : "") << buf;
  }
  out_ << "\n";
}

std::string iso8601_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace crd
