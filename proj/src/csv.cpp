#include "decolight/csv.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace decolight {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void CsvWriter::comment(const std::string& text) {
  if (columns_ != 0) throw std::logic_error("csv: comments must precede the header row");
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) out_ << (line.empty() ? "#" : "# " + line) << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  if (columns_ != 0) throw std::logic_error("csv: header already written");
  if (columns.empty()) throw std::logic_error("csv: header needs at least one column");
  columns_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv: row width differs from the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
}

}  // namespace decolight
