#ifndef MANCOVA_CSV_HPP
#define MANCOVA_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mancova/types.hpp"

namespace mancova::csv {

// Minimal CSV: header row required, comma separated, optional double-quote
// quoting, decimal point '.', UTF-8 passed through.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // throws MissingColumn
  // Numeric parse of one cell; throws NonNumericCell with the 1-based data
  // row number and column name.
  double number_at(int row, int col) const;
};

Table read_csv(const std::string& path);
Table read_csv_stream(std::istream& in, const std::string& origin);

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

}  // namespace mancova::csv

#endif  // MANCOVA_CSV_HPP
