#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "coupledrd/core.hpp"

namespace crd {

/// CSV writer emitting full-precision doubles (%.17g), one header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

/// ISO-8601 UTC timestamp.
std::string iso8601_now();

}  // namespace crd
