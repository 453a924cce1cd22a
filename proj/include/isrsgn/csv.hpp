#pragma once

#include <string>
#include <vector>

namespace isrsgn {

// Minimal CSV table: one header row, numeric or string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  double number(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

std::string format_double(double v);

}  // namespace isrsgn
