#include "mancova/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mancova::csv {

namespace {

std::vector<std::string> parse_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

}  // namespace

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw MissingColumn("missing column: " + name);
}

double Table::number_at(int row, int col) const {
  const std::string cell = trim(rows[row][col]);
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    std::ostringstream msg;
    msg << "non-numeric cell in column '" << columns[col] << "', data row "
        << row + 1 << ": '" << cell << "'";
    throw NonNumericCell(msg.str());
  }
  return v;
}

Table read_csv_stream(std::istream& in, const std::string& origin) {
  Table table;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_done) {
      for (std::string& f : parse_line(line)) table.columns.push_back(trim(f));
      header_done = true;
      continue;
    }
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = parse_line(line);
    if (fields.size() != table.columns.size()) {
      std::ostringstream msg;
      msg << origin << ": data row " << table.rows.size() + 1 << " has "
          << fields.size() << " fields, header has " << table.columns.size();
      throw InvalidData(msg.str());
    }
    table.rows.push_back(std::move(fields));
  }
  if (!header_done) throw InvalidData(origin + ": empty file, header required");
  return table;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open file: " + path);
  return read_csv_stream(in, path);
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      if (needs_quoting(fields[i])) {
        out << '"';
        for (char ch : fields[i]) {
          if (ch == '"') out << "\"\"";
          else out << ch;
        }
        out << '"';
      } else {
        out << fields[i];
      }
    }
    out << '\n';
  };
  emit(columns);
  for (const auto& row : rows) emit(row);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace mancova::csv
