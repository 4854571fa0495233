#include "spc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spc/errors.hpp"

namespace spc {

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> parse_line(const std::string& line, const std::string& path,
                                    std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes) {
    std::ostringstream os;
    os << path << ":" << lineno << ": unterminated quoted field";
    throw SchemaMismatch(os.str());
  }
  fields.push_back(cur);
  return fields;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof() && lineno > 1) break;
    auto fields = parse_line(line, path, lineno);
    if (lineno == 1) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size()) {
        std::ostringstream os;
        os << path << ":" << lineno << ": expected " << table.header.size() << " fields, got "
           << fields.size();
        throw SchemaMismatch(os.str());
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw SchemaMismatch(path + ": empty file (no header row)");
  return table;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  auto emit_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (needs_quoting(row[i])) {
        out << '"';
        for (char c : row[i]) {
          if (c == '"') out << '"';
          out << c;
        }
        out << '"';
      } else {
        out << row[i];
      }
    }
    out << '\n';
  };
  emit_row(table.header);
  for (const auto& row : table.rows) emit_row(row);
  if (!out) throw IoError("write failed on " + path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return std::string(buf);
}

}  // namespace spc
