#pragma once

#include <string>
#include <vector>

namespace spc {

/// In-memory CSV table: header row plus string cells. Quoted fields,
/// embedded commas/quotes and CRLF line endings are handled on read;
/// fields are quoted on write only when needed.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
void write_csv(const CsvTable& table, const std::string& path);

/// Fixed formatting used everywhere a double lands in a CSV cell, so that
/// identical runs produce byte-identical files.
std::string format_double(double v);

}  // namespace spc
